#include "refinekit/oracle.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "refinekit/relation.hpp"

namespace refinekit {

namespace {

std::vector<ActionIndex> visible_alphabet(const Lts& lts) {
  std::vector<ActionIndex> actions;
  for (ActionIndex a = 1; a < lts.labels->size(); ++a) {
    actions.push_back(a);
  }
  return actions;
}

Refusal max_refusal(const Lts& lts, StateIndex s,
                    const std::vector<ActionIndex>& alphabet) {
  std::vector<ActionIndex> enabled = enabled_visible(lts, s);
  Refusal refusal;
  std::set_difference(alphabet.begin(), alphabet.end(), enabled.begin(),
                      enabled.end(), std::back_inserter(refusal));
  return refusal;
}

bool refusal_subset(const Refusal& a, const Refusal& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Keeps only the maximal refusals, sorted for canonical equality.
std::vector<Refusal> canonical_refusals(std::vector<Refusal> refusals) {
  std::sort(refusals.begin(), refusals.end());
  refusals.erase(std::unique(refusals.begin(), refusals.end()), refusals.end());
  std::vector<Refusal> maximal;
  for (std::size_t i = 0; i < refusals.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < refusals.size(); ++j) {
      if (i != j && refusal_subset(refusals[i], refusals[j]) &&
          !(refusals[i] == refusals[j])) {
        dominated = true;
        break;
      }
    }
    if (!dominated) {
      maximal.push_back(refusals[i]);
    }
  }
  return maximal;
}

void extend_divergences(const TraceVec& from,
                        const std::vector<ActionIndex>& alphabet,
                        std::size_t bound, std::set<TraceVec>& out) {
  out.insert(from);
  if (from.size() >= bound) {
    return;
  }
  TraceVec next = from;
  next.push_back(0);
  for (ActionIndex a : alphabet) {
    next.back() = a;
    extend_divergences(next, alphabet, bound, out);
  }
}

struct SetPairHash {
  std::size_t operator()(const std::pair<StateSet, StateSet>& p) const {
    return hash_value(p.first) * 10007 + hash_value(p.second);
  }
};

struct NormPairHash {
  std::size_t operator()(const std::pair<StateSet, StateIndex>& p) const {
    return hash_value(p.first) * 10007 + p.second;
  }
};

// A stable state refuses at least what some stable spec-set member
// refuses iff that member enables, visibly, no more than the state.
bool refusals_covered(const Lts& spec, const StateSet& spec_states,
                      const Lts& impl, StateIndex impl_state) {
  std::vector<ActionIndex> impl_enabled = enabled_visible(impl, impl_state);
  for (StateIndex t : spec_states) {
    if (is_stable(spec, t)) {
      std::vector<ActionIndex> spec_enabled = enabled_visible(spec, t);
      if (std::includes(impl_enabled.begin(), impl_enabled.end(),
                        spec_enabled.begin(), spec_enabled.end())) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace

bool has_failure(const std::map<TraceVec, std::vector<Refusal>>& failures,
                 const TraceVec& trace, const Refusal& refused) {
  auto it = failures.find(trace);
  if (it == failures.end()) {
    return false;
  }
  for (const Refusal& stored : it->second) {
    if (refusal_subset(refused, stored)) {
      return true;
    }
  }
  return false;
}

Observation observe(const Lts& lts, std::size_t bound) {
  const std::vector<ActionIndex> alphabet = visible_alphabet(lts);
  const DivergenceMarking marking = mark_divergent(lts);

  Observation obs;
  std::set<TraceVec> diverging_traces;  // traces reaching a diverging state
  std::map<TraceVec, std::vector<Refusal>> raw_failures;

  // Depth-first expansion of the deterministic reachable-set function.
  struct Item {
    TraceVec trace;
    StateSet states;
  };
  std::vector<Item> stack;
  stack.push_back({{}, tau_closure(lts, StateSet::of({lts.initial}))});
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    obs.weaktraces.insert(item.trace);
    if (marking.any_of(item.states)) {
      diverging_traces.insert(item.trace);
    }
    for (StateIndex s : item.states) {
      if (is_stable(lts, s)) {
        raw_failures[item.trace].push_back(max_refusal(lts, s, alphabet));
      }
    }
    if (item.trace.size() < bound) {
      for (ActionIndex a : alphabet) {
        StateSet next = weak_step(lts, item.states, a);
        if (!next.empty()) {
          TraceVec trace = item.trace;
          trace.push_back(a);
          stack.push_back({std::move(trace), std::move(next)});
        }
      }
    }
  }

  for (auto& [trace, refusals] : raw_failures) {
    obs.failures[trace] = canonical_refusals(std::move(refusals));
  }

  // divergences: suffix-extension closure of the minimal diverging
  // traces; anything goes after divergence.
  for (const TraceVec& trace : diverging_traces) {
    bool minimal = true;
    for (std::size_t len = 0; len < trace.size(); ++len) {
      if (diverging_traces.count(TraceVec(trace.begin(), trace.begin() + len))) {
        minimal = false;
        break;
      }
    }
    if (minimal) {
      obs.min_divergences.insert(trace);
      extend_divergences(trace, alphabet, bound, obs.divergences);
    }
  }

  obs.failures_bottom = obs.failures;
  for (const TraceVec& trace : obs.divergences) {
    obs.failures_bottom[trace] = {alphabet};  // the full alphabet absorbs all
  }
  return obs;
}

std::optional<std::uint64_t> oracle_state_bound(const Lts& spec, const Lts& impl) {
  if (spec.labels != impl.labels) {
    throw std::invalid_argument(
        "specification and implementation must share one label table");
  }
  if (spec.num_states >= 63) {
    return std::nullopt;
  }
  std::uint64_t norm_states = std::uint64_t{1} << spec.num_states;
  if (norm_states > UINT64_MAX / impl.num_states) {
    return std::nullopt;
  }
  return norm_states * impl.num_states;
}

bool oracle_refines(const Lts& spec, const Lts& impl, Relation relation,
                    std::size_t budget) {
  std::optional<std::uint64_t> bound = oracle_state_bound(spec, impl);
  if (!bound || *bound > budget) {
    throw OracleBudgetError();
  }
  const std::uint64_t depth_bound = *bound + 1;

  const DivergenceMarking spec_div = mark_divergent(spec);
  const DivergenceMarking impl_div = mark_divergent(impl);
  const std::vector<ActionIndex> alphabet = visible_alphabet(impl);

  const bool fdr = relation == Relation::FailuresDivergences;
  const bool sfr = relation == Relation::StableFailures;

  struct Item {
    StateSet spec_states;
    StateSet impl_states;
    std::uint64_t depth;
  };
  std::unordered_set<std::pair<StateSet, StateSet>, SetPairHash> visited;
  std::deque<Item> queue;
  queue.push_back({tau_closure(spec, StateSet::of({spec.initial})),
                   tau_closure(impl, StateSet::of({impl.initial})), 0});
  visited.insert({queue.front().spec_states, queue.front().impl_states});

  while (!queue.empty()) {
    Item item = std::move(queue.front());
    queue.pop_front();

    if (fdr && spec_div.any_of(item.spec_states)) {
      // Divergence of the specification obscures everything beyond
      // this trace; the subtree cannot distinguish the two.
      continue;
    }
    if (item.spec_states.empty()) {
      return false;  // a weak trace (or failure) the spec does not have
    }
    if (fdr && impl_div.any_of(item.impl_states)) {
      return false;  // divergence the spec does not permit
    }
    if (fdr || sfr) {
      for (StateIndex s : item.impl_states) {
        if (is_stable(impl, s) &&
            !refusals_covered(spec, item.spec_states, impl, s)) {
          return false;  // refusal the spec cannot produce
        }
      }
    }
    if (item.depth >= depth_bound) {
      continue;
    }
    for (ActionIndex a : alphabet) {
      StateSet impl_next = weak_step(impl, item.impl_states, a);
      if (impl_next.empty()) {
        continue;  // the implementation has no such trace
      }
      StateSet spec_next = weak_step(spec, item.spec_states, a);
      auto key = std::make_pair(spec_next, impl_next);
      if (visited.insert(key).second) {
        queue.push_back(
            {std::move(spec_next), std::move(impl_next), item.depth + 1});
      }
    }
  }
  return true;
}

std::optional<std::size_t> shortest_witness_distance(const Lts& spec,
                                                     const Lts& impl,
                                                     Relation relation,
                                                     std::size_t budget) {
  std::optional<std::uint64_t> bound = oracle_state_bound(spec, impl);
  if (!bound || *bound > budget) {
    throw OracleBudgetError();
  }

  const DivergenceMarking spec_div = mark_divergent(spec);
  const DivergenceMarking impl_div = mark_divergent(impl);
  const bool fdr = relation == Relation::FailuresDivergences;
  const bool sfr = relation == Relation::StableFailures;

  using Pair = std::pair<StateSet, StateIndex>;

  auto is_witness = [&](const Pair& pair) {
    if (fdr && spec_div.any_of(pair.first)) {
      return false;
    }
    if (pair.first.empty()) {
      return true;
    }
    if (fdr && impl_div(pair.second)) {
      return true;
    }
    if ((fdr || sfr) && is_stable(impl, pair.second) &&
        !refusals_covered(spec, pair.first, impl, pair.second)) {
      return true;
    }
    return false;
  };

  // 0-1 breadth-first search of the product in the visible-length
  // metric: tau-steps of the implementation cost nothing and go to the
  // front of the deque, visible steps cost one and go to the back.
  // Pairs pop in nondecreasing distance, so the first witness popped
  // is at the minimal visible distance.
  std::unordered_map<Pair, std::size_t, NormPairHash> dist;
  std::deque<std::pair<Pair, std::size_t>> deque;
  Pair root{tau_closure(spec, StateSet::of({spec.initial})), impl.initial};
  dist[root] = 0;
  deque.push_back({root, 0});

  while (!deque.empty()) {
    auto [pair, d] = std::move(deque.front());
    deque.pop_front();
    if (d != dist[pair]) {
      continue;  // stale entry, superseded by a shorter discovery
    }
    if (is_witness(pair)) {
      return d;
    }
    if (fdr && spec_div.any_of(pair.first)) {
      continue;  // no outgoing transitions in the fdr normal form
    }
    for (const Transition& t : impl.out[pair.second]) {
      bool silent = t.action == tau_action;
      Pair next{silent ? pair.first : weak_step(spec, pair.first, t.action),
                t.target};
      std::size_t nd = silent ? d : d + 1;
      auto it = dist.find(next);
      if (it != dist.end() && it->second <= nd) {
        continue;
      }
      dist[next] = nd;
      if (silent) {
        deque.push_front({std::move(next), nd});
      } else {
        deque.push_back({std::move(next), nd});
      }
    }
  }
  return std::nullopt;
}

const char* to_string(Relation relation) {
  switch (relation) {
    case Relation::Trace:
      return "trace";
    case Relation::StableFailures:
      return "stable-failures";
    case Relation::FailuresDivergences:
      return "failures-divergences";
  }
  return "?";
}

}  // namespace refinekit
