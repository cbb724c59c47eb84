#include "refinekit/generators.hpp"

#include <cassert>
#include <random>
#include <stdexcept>

namespace refinekit {

Lts gen_ladder(StateIndex n, std::size_t k) {
  if (n < 1 || k < 1) {
    throw std::invalid_argument("gen_ladder requires n >= 1 and k >= 1");
  }
  auto labels = std::make_shared<LabelTable>();
  std::vector<ActionIndex> actions;
  actions.reserve(k);
  for (std::size_t j = 1; j <= k; ++j) {
    actions.push_back(labels->intern("a" + std::to_string(j)));
  }
  Lts lts;
  lts.num_states = n;
  lts.initial = n - 1;
  lts.labels = std::move(labels);
  lts.out.resize(n);
  for (StateIndex i = n; i > 1; --i) {
    for (ActionIndex a : actions) {
      lts.out[i - 1].push_back({a, i - 2});
    }
  }
  return lts;
}

Lts gen_random(const RandomLtsParams& params, std::shared_ptr<LabelTable> labels) {
  assert(params.transition_density >= 0.0 && params.transition_density <= 1.0);
  assert(params.tau_density >= 0.0 && params.tau_density <= 1.0);
  if (params.num_states < 1) {
    throw std::invalid_argument("gen_random requires at least one state");
  }
  if (!labels) {
    labels = std::make_shared<LabelTable>();
  }
  std::vector<ActionIndex> actions;
  for (std::size_t j = 1; j <= params.num_actions; ++j) {
    actions.push_back(labels->intern("a" + std::to_string(j)));
  }

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<StateIndex> pick_state(0, params.num_states - 1);

  Lts lts;
  lts.num_states = params.num_states;
  lts.initial = 0;
  lts.labels = std::move(labels);
  lts.out.resize(params.num_states);
  for (StateIndex s = 0; s < params.num_states; ++s) {
    for (ActionIndex a : actions) {
      if (coin(rng) < params.transition_density) {
        lts.out[s].push_back({a, pick_state(rng)});
        // Second draw at half density keeps some nondeterminism around.
        if (coin(rng) < params.transition_density / 2.0) {
          lts.out[s].push_back({a, pick_state(rng)});
        }
      }
    }
    if (coin(rng) < params.tau_density) {
      lts.out[s].push_back({tau_action, pick_state(rng)});
    }
  }
  return prune_unreachable(lts);
}

Lts drop_random_transitions(const Lts& lts, double drop_fraction,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  Lts result;
  result.num_states = lts.num_states;
  result.initial = lts.initial;
  result.labels = lts.labels;
  result.out.resize(lts.num_states);
  for (StateIndex s = 0; s < lts.num_states; ++s) {
    for (const Transition& t : lts.out[s]) {
      if (coin(rng) >= drop_fraction) {
        result.out[s].push_back(t);
      }
    }
  }
  return prune_unreachable(result);
}

}  // namespace refinekit
