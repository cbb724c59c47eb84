#include "refinekit/refinement.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "refinekit/antichain.hpp"

namespace refinekit {

namespace {

bool includes_sorted(const std::vector<ActionIndex>& sub,
                     const std::vector<ActionIndex>& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

// Shared immutable inputs plus per-check caches and the memoised
// normal-form session. Exclusive to one check.
struct Session {
  const Lts& spec;
  const Lts& impl;
  DivergenceMarking spec_div;
  DivergenceMarking impl_div;
  NormContext norm;
  std::vector<char> spec_stable;
  std::vector<char> impl_stable;
  std::vector<std::vector<ActionIndex>> spec_enabled_vis;
  std::vector<std::vector<ActionIndex>> impl_enabled_vis;

  Session(const Lts& spec_lts, const Lts& impl_lts)
      : spec(spec_lts),
        impl(impl_lts),
        spec_div(mark_divergent(spec_lts)),
        impl_div(mark_divergent(impl_lts)),
        norm(spec_lts, spec_div) {
    if (spec.labels != impl.labels) {
      throw std::invalid_argument(
          "specification and implementation must share one label table");
    }
    spec_stable.resize(spec.num_states);
    spec_enabled_vis.resize(spec.num_states);
    for (StateIndex s = 0; s < spec.num_states; ++s) {
      spec_stable[s] = is_stable(spec, s);
      spec_enabled_vis[s] = enabled_visible(spec, s);
    }
    impl_stable.resize(impl.num_states);
    impl_enabled_vis.resize(impl.num_states);
    for (StateIndex s = 0; s < impl.num_states; ++s) {
      impl_stable[s] = is_stable(impl, s);
      impl_enabled_vis[s] = enabled_visible(impl, s);
    }
  }

  // refusals(impl_state) included in refusals of the normal state,
  // for stable impl_state.
  bool refusal_ok(StateIndex impl_state, const NormState& spec_state) const {
    for (StateIndex t : spec_state.states) {
      if (spec_stable[t] &&
          includes_sorted(spec_enabled_vis[t], impl_enabled_vis[impl_state])) {
        return true;
      }
    }
    return false;
  }

  // The legacy refusal semantics: every stable state tau-reachable from
  // impl_state must have its refusals covered. Implemented as a fresh
  // DFS over tau-edges per call, preserving the original cost profile.
  bool legacy_refusal_ok(StateIndex impl_state, const NormState& spec_state) const {
    std::vector<char> seen(impl.num_states, 0);
    std::vector<StateIndex> stack{impl_state};
    seen[impl_state] = 1;
    while (!stack.empty()) {
      StateIndex s = stack.back();
      stack.pop_back();
      if (impl_stable[s] && !refusal_ok(s, spec_state)) {
        return false;
      }
      for (const Transition& t : impl.out[s]) {
        if (t.action == tau_action && !seen[t.target]) {
          seen[t.target] = 1;
          stack.push_back(t.target);
        }
      }
    }
    return true;
  }
};

struct ParentLink {
  ProductPair parent;
  ActionIndex action;
};

using ParentMap = std::unordered_map<ProductPair, ParentLink>;

std::vector<ActionIndex> visible_path(const ParentMap& parents,
                                      const ProductPair& pair,
                                      std::optional<ActionIndex> final_action) {
  std::vector<ActionIndex> actions;
  ProductPair current = pair;
  for (;;) {
    auto it = parents.find(current);
    if (it == parents.end()) {
      break;  // root
    }
    actions.push_back(it->second.action);
    current = it->second.parent;
  }
  std::reverse(actions.begin(), actions.end());
  if (final_action) {
    actions.push_back(*final_action);
  }
  std::erase(actions, tau_action);
  return actions;
}

// Per-iteration invariant evaluation; only active when instrumenting.
struct Recorder {
  std::vector<InstrumentationRecord> log;
  std::vector<ProductPair> done_list;
  std::unordered_set<ProductPair> done_keys;

  void mark_done(const ProductPair& pair) {
    done_list.push_back(pair);
    done_keys.insert(pair);
  }

  void snapshot(std::size_t iteration, const std::deque<ProductPair>& working,
                const Antichain& antichain) {
    InstrumentationRecord record;
    record.iteration = iteration;
    record.working_size = working.size();

    std::size_t working_not_member = 0;
    std::unordered_set<ProductPair> seen;
    std::size_t duplicates = 0;
    std::size_t rescheduled = 0;
    for (const ProductPair& pair : working) {
      if (!antichain.member(pair)) {
        ++working_not_member;
      }
      if (!seen.insert(pair).second) {
        ++duplicates;
      }
      if (done_keys.count(pair) > 0) {
        ++rescheduled;
      }
    }
    std::size_t done_not_member = 0;
    for (const ProductPair& pair : done_list) {
      if (!antichain.member(pair)) {
        ++done_not_member;
      }
    }

    if (working_not_member > 0) {
      record.violations.push_back("working not covered by antichain (" +
                                  std::to_string(working_not_member) + " pairs)");
    }
    if (done_not_member > 0) {
      record.violations.push_back("done not covered by antichain (" +
                                  std::to_string(done_not_member) + " pairs)");
    }
    if (duplicates > 0) {
      record.violations.push_back("duplicate pairs in working (" +
                                  std::to_string(duplicates) + ")");
    }
    if (rescheduled > 0) {
      record.violations.push_back("done pairs scheduled again (" +
                                  std::to_string(rescheduled) + ")");
    }
    if (!antichain.is_proper()) {
      record.violations.push_back("antichain not proper");
    }
    log.push_back(std::move(record));
  }
};

struct ExploreOutput {
  CheckResult result;
  std::vector<std::pair<StateSet, StateIndex>> final_antichain;
};

ExploreOutput explore(Session& session, const ExplorationConfig& config,
                      Recorder* recorder) {
  const bool fdr = config.relation == Relation::FailuresDivergences;
  const bool check_refusals = config.relation != Relation::Trace;
  const bool legacy = config.variant == Variant::Legacy;
  const bool depth_first = config.strategy == Strategy::DepthFirst;

  if (legacy && fdr && !config.allow_unsound_legacy_fdr) {
    throw std::invalid_argument(
        "the legacy failures-divergences algorithm is unsound; pass the "
        "explicit acknowledgement to run it anyway");
  }

  Metrics metrics;
  std::deque<ProductPair> working;
  Antichain antichain;
  ParentMap parents;
  std::size_t pushes = 0;

  ProductPair root{session.norm.initial(), session.impl.initial};
  working.push_back(root);
  ++pushes;
  if (!legacy) {
    antichain.insert(root);
  }
  metrics.working_max = 1;
  metrics.antichain_max = antichain.size();

  auto finish = [&](Verdict verdict) {
    verdict.metrics = metrics;
    ExploreOutput out;
    out.result = CheckResult{CheckStatus::Completed, std::move(verdict)};
    out.final_antichain = antichain.pairs();
    return out;
  };

  auto fail = [&](WitnessKind kind, const ProductPair& at,
                  std::optional<ActionIndex> final_action) {
    Verdict verdict;
    verdict.refines = false;
    verdict.witness_kind = kind;
    if (config.want_counterexample) {
      verdict.counterexample = visible_path(parents, at, final_action);
    }
    return finish(std::move(verdict));
  };

  std::size_t iteration = 0;
  while (!working.empty()) {
    ProductPair pair = depth_first ? working.back() : working.front();
    if (depth_first) {
      working.pop_back();
    } else {
      working.pop_front();
    }
    ++iteration;
    ++metrics.pairs_done;

    if (legacy) {
      antichain.insert_unchecked(pair);
      metrics.antichain_max = std::max(metrics.antichain_max, antichain.size());
    }

    bool expand = true;
    if (fdr) {
      if (!legacy) {
        // Diverging specification states permit everything; skip.
        if (pair.spec.diverges) {
          expand = false;
        } else if (session.impl_div(pair.impl)) {
          return fail(WitnessKind::Divergence, pair, std::nullopt);
        }
      } else {
        // Original test order: implementation divergence first.
        if (session.impl_div(pair.impl)) {
          if (!pair.spec.diverges) {
            return fail(WitnessKind::Divergence, pair, std::nullopt);
          }
          expand = false;
        }
      }
    }

    if (expand && check_refusals) {
      if (!legacy) {
        if (session.impl_stable[pair.impl] &&
            !session.refusal_ok(pair.impl, pair.spec)) {
          return fail(WitnessKind::Refusal, pair, std::nullopt);
        }
      } else {
        if (!session.legacy_refusal_ok(pair.impl, pair.spec)) {
          return fail(WitnessKind::Refusal, pair, std::nullopt);
        }
      }
    }

    if (expand) {
      for (const Transition& t : session.impl.out[pair.impl]) {
        const NormState* successor;
        if (t.action == tau_action) {
          successor = &pair.spec;
        } else {
          // Under improved fdr, expansion only happens for non-diverging
          // specification states, so the fdr normal-form successor exists
          // and coincides with the plain one; the legacy variant explores
          // the plain normal form by construction.
          assert(legacy || !fdr || !pair.spec.diverges);
          successor = &session.norm.successor(pair.spec, t.action);
          if (successor->states.empty()) {
            return fail(WitnessKind::EmptySpec, pair, t.action);
          }
        }
        ProductPair next{*successor, t.target};
        if (antichain.member(next)) {
          ++metrics.antichain_hits;
          continue;
        }
        ++metrics.antichain_misses;
        if (!legacy) {
          antichain.insert(next);
          metrics.antichain_max =
              std::max(metrics.antichain_max, antichain.size());
        }
        if (config.want_counterexample) {
          parents.emplace(next, ParentLink{pair, t.action});
        }
        working.push_back(next);
        ++pushes;
        metrics.working_max = std::max(metrics.working_max, working.size());
        if (config.node_budget != 0 && pushes > config.node_budget) {
          ExploreOutput out;
          Verdict verdict;
          verdict.metrics = metrics;
          out.result = CheckResult{CheckStatus::BudgetExceeded, std::move(verdict)};
          out.final_antichain = antichain.pairs();
          return out;
        }
      }
    }

    if (recorder != nullptr) {
      recorder->mark_done(pair);
      recorder->snapshot(iteration, working, antichain);
    }
  }

  Verdict verdict;
  verdict.refines = true;
  return finish(std::move(verdict));
}

struct MinimalWitness {
  std::vector<ActionIndex> visible;
  WitnessKind kind;
};

// Exact shortest counterexample for a failing improved check: a 0-1
// breadth-first search over the unpruned normal-form product in the
// visible-length metric, with tau-steps costing nothing (deque front)
// and visible steps costing one (deque back). Parent links follow the
// best known distance, so the first witness popped yields a visible
// counterexample of minimal length. Antichain pruning is deliberately
// not applied here; it can lengthen the path recorded through parent
// links of the main exploration.
std::optional<MinimalWitness> minimal_counterexample(Session& session,
                                                     Relation relation) {
  const bool fdr = relation == Relation::FailuresDivergences;
  const bool check_refusals = relation != Relation::Trace;

  auto witness_kind = [&](const ProductPair& pair) -> std::optional<WitnessKind> {
    if (fdr && pair.spec.diverges) {
      return std::nullopt;  // permits everything, never a witness
    }
    if (pair.spec.states.empty()) {
      return WitnessKind::EmptySpec;
    }
    if (fdr && session.impl_div(pair.impl)) {
      return WitnessKind::Divergence;
    }
    if (check_refusals && session.impl_stable[pair.impl] &&
        !session.refusal_ok(pair.impl, pair.spec)) {
      return WitnessKind::Refusal;
    }
    return std::nullopt;
  };

  ParentMap parents;
  std::unordered_map<ProductPair, std::size_t> dist;
  std::deque<std::pair<ProductPair, std::size_t>> deque;

  ProductPair root{session.norm.initial(), session.impl.initial};
  dist[root] = 0;
  deque.push_back({root, 0});

  while (!deque.empty()) {
    auto [pair, d] = std::move(deque.front());
    deque.pop_front();
    if (d != dist[pair]) {
      continue;  // stale entry, superseded by a shorter discovery
    }
    if (auto kind = witness_kind(pair)) {
      return MinimalWitness{visible_path(parents, pair, std::nullopt), *kind};
    }
    if (fdr && pair.spec.diverges) {
      continue;  // no outgoing transitions in the fdr normal form
    }
    for (const Transition& t : session.impl.out[pair.impl]) {
      bool silent = t.action == tau_action;
      ProductPair next{silent ? pair.spec
                              : session.norm.successor(pair.spec, t.action),
                       t.target};
      std::size_t nd = silent ? d : d + 1;
      auto it = dist.find(next);
      if (it != dist.end() && it->second <= nd) {
        continue;
      }
      dist[next] = nd;
      parents.insert_or_assign(next, ParentLink{pair, t.action});
      if (silent) {
        deque.push_front({std::move(next), nd});
      } else {
        deque.push_back({std::move(next), nd});
      }
    }
  }
  return std::nullopt;
}

CheckResult run_session(Session& session, const ExplorationConfig& config,
                        Recorder* recorder,
                        std::vector<std::pair<StateSet, StateIndex>>* antichain_out) {
  ExploreOutput output = explore(session, config, recorder);
  if (antichain_out != nullptr) {
    *antichain_out = std::move(output.final_antichain);
  }
  CheckResult result = std::move(output.result);

  // Breadth-first counterexamples are promised to be minimal; the
  // pruned exploration cannot always guarantee that, so recompute.
  if (result.status == CheckStatus::Completed && !result.verdict.refines &&
      config.want_counterexample && config.variant == Variant::Improved &&
      config.strategy == Strategy::BreadthFirst) {
    if (auto minimal = minimal_counterexample(session, config.relation)) {
      result.verdict.counterexample = std::move(minimal->visible);
      result.verdict.witness_kind = minimal->kind;
    }
  }
  return result;
}

}  // namespace

bool refusals_included(StateIndex impl_state, const NormState& spec_state,
                       const Lts& spec, const Lts& impl) {
  assert(is_stable(impl, impl_state));
  std::vector<ActionIndex> impl_enabled = enabled_visible(impl, impl_state);
  for (StateIndex t : spec_state.states) {
    if (is_stable(spec, t) &&
        includes_sorted(enabled_visible(spec, t), impl_enabled)) {
      return true;
    }
  }
  return false;
}

CheckResult run_check(const Lts& spec, const Lts& impl,
                      const ExplorationConfig& config) {
  Session session(spec, impl);
  return run_session(session, config, nullptr, nullptr);
}

Verdict refines_improved(const Lts& spec, const Lts& impl,
                         const ExplorationConfig& config) {
  ExplorationConfig effective = config;
  effective.variant = Variant::Improved;
  effective.node_budget = 0;
  CheckResult result = run_check(spec, impl, effective);
  return result.verdict;
}

Verdict refines_legacy(const Lts& spec, const Lts& impl,
                       const ExplorationConfig& config) {
  ExplorationConfig effective = config;
  effective.variant = Variant::Legacy;
  effective.node_budget = 0;
  CheckResult result = run_check(spec, impl, effective);
  return result.verdict;
}

InstrumentedRun run_with_instrumentation(const Lts& spec, const Lts& impl,
                                         const ExplorationConfig& config) {
  ExplorationConfig effective = config;
  effective.invariant_checks = true;
  effective.node_budget = 0;

  Session session(spec, impl);
  Recorder recorder;
  InstrumentedRun run;
  CheckResult result =
      run_session(session, effective, &recorder, &run.final_antichain);
  assert(result.status == CheckStatus::Completed);
  run.verdict = std::move(result.verdict);
  run.log = std::move(recorder.log);
  for (const InstrumentationRecord& record : run.log) {
    run.total_violations += record.violations.size();
  }
  return run;
}

const char* to_string(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::EmptySpec:
      return "empty-spec";
    case WitnessKind::Refusal:
      return "refusal";
    case WitnessKind::Divergence:
      return "divergence";
  }
  return "?";
}

}  // namespace refinekit
