#include <doctest.h>

#include <deque>
#include <functional>
#include <unordered_set>

#include "fixtures.hpp"
#include "refinekit/antichain.hpp"
#include "refinekit/oracle.hpp"
#include "refinekit/refinement.hpp"

using namespace refinekit;

namespace {

ExplorationConfig config_for(Relation relation, Strategy strategy,
                             Variant variant = Variant::Improved) {
  ExplorationConfig config;
  config.relation = relation;
  config.strategy = strategy;
  config.variant = variant;
  config.allow_unsound_legacy_fdr = variant == Variant::Legacy;
  return config;
}

bool improved_refines(const fixtures::LtsPair& pair, Relation relation,
                      Strategy strategy) {
  return refines_improved(pair.spec, pair.impl, config_for(relation, strategy))
      .refines;
}

const Relation all_relations[] = {Relation::Trace, Relation::StableFailures,
                                  Relation::FailuresDivergences};
const Strategy all_strategies[] = {Strategy::DepthFirst, Strategy::BreadthFirst};

// Reachable product pairs of the (fdr) normal form with the
// implementation, enumerated without pruning.
std::vector<ProductPair> reachable_product(NormContext& norm, const Lts& impl,
                                           bool fdr) {
  std::vector<ProductPair> found;
  std::unordered_set<ProductPair> seen;
  std::deque<ProductPair> queue{{norm.initial(), impl.initial}};
  seen.insert(queue.front());
  while (!queue.empty()) {
    ProductPair pair = std::move(queue.front());
    queue.pop_front();
    found.push_back(pair);
    for (const Transition& t : impl.out[pair.impl]) {
      std::optional<NormState> spec_next;
      if (t.action == tau_action) {
        spec_next = pair.spec;
      } else if (fdr) {
        spec_next = norm.fdr_successor(pair.spec, t.action);
      } else {
        spec_next = norm.successor(pair.spec, t.action);
      }
      if (!spec_next) {
        continue;
      }
      ProductPair next{std::move(*spec_next), t.target};
      if (seen.insert(next).second) {
        queue.push_back(next);
      }
    }
  }
  return found;
}

bool is_fd_witness(const ProductPair& pair, const Lts& spec, const Lts& impl,
                   const DivergenceMarking& impl_div) {
  if (pair.spec.diverges) {
    return false;
  }
  return pair.spec.states.empty() || impl_div(pair.impl) ||
         (is_stable(impl, pair.impl) &&
          !refusals_included(pair.impl, pair.spec, spec, impl));
}

}  // namespace

TEST_CASE("refusal inclusion by maximal-refusal comparison") {
  auto strict =
      fixtures::parse_pair(fixtures::atm_spec_aut, fixtures::atm_strict_aut);
  DivergenceMarking marking = mark_divergent(strict.spec);
  NormContext norm(strict.spec, marking);

  // The deadlocked implementation state refuses everything; the initial
  // spec state still offers req.
  NormState root = norm.initial();
  CHECK_FALSE(refusals_included(2, root, strict.spec, strict.impl));

  auto polling =
      fixtures::parse_pair(fixtures::atm_polling_aut, fixtures::atm_polling_aut);
  DivergenceMarking polling_marking = mark_divergent(polling.spec);
  NormContext polling_norm(polling.spec, polling_marking);
  CHECK(refusals_included(0, polling_norm.initial(), polling.spec, polling.impl));

  // An implementation state enabling the whole alphabet refuses only
  // the empty set, so any stable spec member covers it.
  auto wide = fixtures::parse_pair(
      "des (0,1,2)\n(0,\"req\",1)\n",
      "des (0,2,1)\n(0,\"req\",0)\n(0,\"20\",0)\n");
  DivergenceMarking wide_marking = mark_divergent(wide.spec);
  NormContext wide_norm(wide.spec, wide_marking);
  CHECK(refusals_included(0, wide_norm.initial(), wide.spec, wide.impl));
  NormState deadlocked = wide_norm.flag(StateSet::of({1}));
  CHECK(refusals_included(0, deadlocked, wide.spec, wide.impl));
  // No stable spec member at all: nothing is covered.
  auto busy = fixtures::parse_pair("des (0,1,1)\n(0,\"tau\",0)\n",
                                   "des (0,0,1)\n");
  DivergenceMarking busy_marking = mark_divergent(busy.spec);
  NormContext busy_norm(busy.spec, busy_marking);
  CHECK_FALSE(refusals_included(0, busy_norm.initial(), busy.spec, busy.impl));
}

TEST_CASE("the teller verdict matrix under both strategies") {
  auto strict =
      fixtures::parse_pair(fixtures::atm_spec_aut, fixtures::atm_strict_aut);
  auto polling =
      fixtures::parse_pair(fixtures::atm_spec_aut, fixtures::atm_polling_aut);
  auto reversed =
      fixtures::parse_pair(fixtures::atm_polling_aut, fixtures::atm_spec_aut);
  auto lenient =
      fixtures::parse_pair(fixtures::atm_polling_aut, fixtures::atm_strict_aut);

  for (Strategy strategy : all_strategies) {
    CHECK(improved_refines(strict, Relation::Trace, strategy));
    CHECK_FALSE(improved_refines(strict, Relation::StableFailures, strategy));
    CHECK_FALSE(improved_refines(strict, Relation::FailuresDivergences, strategy));
    CHECK(improved_refines(polling, Relation::StableFailures, strategy));
    CHECK_FALSE(improved_refines(polling, Relation::FailuresDivergences, strategy));
    CHECK(improved_refines(lenient, Relation::FailuresDivergences, strategy));
    CHECK_FALSE(improved_refines(reversed, Relation::Trace, strategy));
    CHECK_FALSE(improved_refines(reversed, Relation::StableFailures, strategy));
  }
}

TEST_CASE("failure verdicts carry the witness kind and counterexample") {
  auto polling =
      fixtures::parse_pair(fixtures::atm_spec_aut, fixtures::atm_polling_aut);
  for (Strategy strategy : all_strategies) {
    Verdict verdict = refines_improved(
        polling.spec, polling.impl,
        config_for(Relation::FailuresDivergences, strategy));
    CHECK_FALSE(verdict.refines);
    CHECK(verdict.witness_kind == WitnessKind::Divergence);
    REQUIRE(verdict.counterexample.has_value());
    CHECK(*verdict.counterexample == fixtures::trace_of(*polling.labels, {"req"}));
  }

  auto strict =
      fixtures::parse_pair(fixtures::atm_spec_aut, fixtures::atm_strict_aut);
  for (Strategy strategy : all_strategies) {
    Verdict verdict = refines_improved(
        strict.spec, strict.impl, config_for(Relation::StableFailures, strategy));
    CHECK_FALSE(verdict.refines);
    CHECK(verdict.witness_kind == WitnessKind::Refusal);
    REQUIRE(verdict.counterexample.has_value());
    CHECK(*verdict.counterexample ==
          fixtures::trace_of(*strict.labels, {"req", "20"}));
  }
}

TEST_CASE("refining verdicts carry neither witness nor counterexample") {
  auto strict =
      fixtures::parse_pair(fixtures::atm_spec_aut, fixtures::atm_strict_aut);
  Verdict verdict = refines_improved(
      strict.spec, strict.impl,
      config_for(Relation::Trace, Strategy::BreadthFirst));
  CHECK(verdict.refines);
  CHECK_FALSE(verdict.witness_kind.has_value());
  CHECK_FALSE(verdict.counterexample.has_value());
}

TEST_CASE("divergence corner cases separate the algorithm variants") {
  // A diverging root makes the specification chaotic: everything
  // refines it. The improved algorithm sees that, the legacy one does
  // not.
  auto chaotic =
      fixtures::parse_pair(fixtures::chaotic_a_loop_aut, fixtures::b_loop_aut);
  for (Strategy strategy : all_strategies) {
    CHECK(refines_improved(chaotic.spec, chaotic.impl,
                           config_for(Relation::FailuresDivergences, strategy))
              .refines);
    CHECK_FALSE(refines_legacy(chaotic.spec, chaotic.impl,
                               config_for(Relation::FailuresDivergences, strategy,
                                          Variant::Legacy))
                    .refines);
  }

  // Here both sides diverge immediately and the legacy algorithm stops
  // the iteration early, which happens to be the correct verdict.
  auto cycles = fixtures::parse_pair(fixtures::diverging_a_cycle_aut,
                                     fixtures::diverging_a_step_aut);
  CHECK(refines_legacy(cycles.spec, cycles.impl,
                       config_for(Relation::FailuresDivergences,
                                  Strategy::DepthFirst, Variant::Legacy))
            .refines);
  CHECK(refines_improved(cycles.spec, cycles.impl,
                         config_for(Relation::FailuresDivergences,
                                    Strategy::DepthFirst))
            .refines);

  // The legacy trace algorithm is sound.
  auto strict =
      fixtures::parse_pair(fixtures::atm_spec_aut, fixtures::atm_strict_aut);
  CHECK(refines_legacy(strict.spec, strict.impl,
                       config_for(Relation::Trace, Strategy::DepthFirst,
                                  Variant::Legacy))
            .refines);
}

TEST_CASE("legacy failures-divergences checking needs the acknowledgement") {
  auto pair =
      fixtures::parse_pair(fixtures::atm_spec_aut, fixtures::atm_strict_aut);
  ExplorationConfig config = config_for(Relation::FailuresDivergences,
                                        Strategy::DepthFirst, Variant::Legacy);
  config.allow_unsound_legacy_fdr = false;
  CHECK_THROWS_AS(refines_legacy(pair.spec, pair.impl, config),
                  std::invalid_argument);
}

TEST_CASE("everything refines itself under every configuration") {
  for (std::uint64_t i = 0; i < 20; ++i) {
    Lts lts = fixtures::suite_single(i);
    for (Relation relation : all_relations) {
      for (Strategy strategy : all_strategies) {
        CHECK(refines_improved(lts, lts, config_for(relation, strategy)).refines);
        if (relation != Relation::FailuresDivergences) {
          CHECK(refines_legacy(lts, lts,
                               config_for(relation, strategy, Variant::Legacy))
                    .refines);
        }
      }
    }
  }
}

TEST_CASE("improved verdicts agree with the oracle") {
  for (std::uint64_t i = 0; i < 250; ++i) {
    auto pair = fixtures::suite_pair(i);
    for (Relation relation : all_relations) {
      bool expected = oracle_refines(pair.spec, pair.impl, relation);
      for (Strategy strategy : all_strategies) {
        ExplorationConfig config = config_for(relation, strategy);
        config.want_counterexample = false;
        INFO("pair ", i, " relation ", to_string(relation), " strategy ",
             strategy == Strategy::DepthFirst ? "df" : "bf");
        CHECK(refines_improved(pair.spec, pair.impl, config).refines == expected);
      }
    }
  }
}

TEST_CASE("legacy trace and stable-failures verdicts are also sound") {
  for (std::uint64_t i = 0; i < 120; ++i) {
    auto pair = fixtures::suite_pair(i);
    for (Relation relation : {Relation::Trace, Relation::StableFailures}) {
      bool expected = oracle_refines(pair.spec, pair.impl, relation);
      for (Strategy strategy : all_strategies) {
        ExplorationConfig config = config_for(relation, strategy, Variant::Legacy);
        config.want_counterexample = false;
        INFO("pair ", i, " relation ", to_string(relation));
        CHECK(refines_legacy(pair.spec, pair.impl, config).refines == expected);
      }
    }
  }
}

TEST_CASE("breadth-first counterexamples have minimal visible length") {
  for (std::uint64_t i = 0; i < 250; ++i) {
    auto pair = fixtures::suite_pair(i);
    for (Relation relation : all_relations) {
      Verdict verdict = refines_improved(
          pair.spec, pair.impl, config_for(relation, Strategy::BreadthFirst));
      auto distance = shortest_witness_distance(pair.spec, pair.impl, relation);
      INFO("pair ", i, " relation ", to_string(relation));
      REQUIRE(verdict.refines == !distance.has_value());
      if (!verdict.refines) {
        REQUIRE(verdict.counterexample.has_value());
        CHECK(verdict.counterexample->size() == *distance);
      }
    }
  }
}

TEST_CASE("smaller product pairs simulate the traces of larger ones") {
  // For reachable pairs (U,s) <= (V,s), any sequence executable from
  // (V,s) is executable from (U,s) and ends in a <=-smaller pair.
  for (std::uint64_t i = 0; i < 60; ++i) {
    auto pair = fixtures::suite_pair(i);
    DivergenceMarking marking = mark_divergent(pair.spec);
    NormContext norm(pair.spec, marking);
    std::vector<ProductPair> pairs = reachable_product(norm, pair.impl, true);

    std::function<void(const ProductPair&, const ProductPair&, int)> walk =
        [&](const ProductPair& small, const ProductPair& large, int depth) {
          CHECK(small.spec.states.subset_of(large.spec.states));
          if (depth == 0) {
            return;
          }
          for (const Transition& t : pair.impl.out[large.impl]) {
            std::optional<NormState> large_next, small_next;
            if (t.action == tau_action) {
              large_next = large.spec;
              small_next = small.spec;
            } else {
              large_next = norm.fdr_successor(large.spec, t.action);
              if (!large_next) {
                continue;  // no transition from the larger pair either
              }
              small_next = norm.fdr_successor(small.spec, t.action);
              REQUIRE(small_next.has_value());
            }
            walk(ProductPair{*small_next, t.target},
                 ProductPair{*large_next, t.target}, depth - 1);
          }
        };

    for (const ProductPair& u : pairs) {
      for (const ProductPair& v : pairs) {
        if (u.impl == v.impl && u.spec.states.subset_of(v.spec.states)) {
          walk(u, v, 3);
        }
      }
    }
  }
}

TEST_CASE("witnesses are anti-monotone in the product ordering") {
  for (std::uint64_t i = 0; i < 80; ++i) {
    auto pair = fixtures::suite_pair(i);
    DivergenceMarking spec_div = mark_divergent(pair.spec);
    DivergenceMarking impl_div = mark_divergent(pair.impl);
    NormContext norm(pair.spec, spec_div);
    std::vector<ProductPair> pairs = reachable_product(norm, pair.impl, true);
    for (const ProductPair& u : pairs) {
      for (const ProductPair& v : pairs) {
        if (u.impl == v.impl && u.spec.states.subset_of(v.spec.states) &&
            is_fd_witness(v, pair.spec, pair.impl, impl_div)) {
          INFO("pair ", i);
          CHECK(is_fd_witness(u, pair.spec, pair.impl, impl_div));
        }
      }
    }
  }
}

TEST_CASE("diverging specification states reach no witness") {
  for (std::uint64_t i = 0; i < 80; ++i) {
    auto pair = fixtures::suite_pair(i);
    DivergenceMarking spec_div = mark_divergent(pair.spec);
    DivergenceMarking impl_div = mark_divergent(pair.impl);
    NormContext norm(pair.spec, spec_div);
    for (const ProductPair& start : reachable_product(norm, pair.impl, true)) {
      if (!start.spec.diverges) {
        continue;
      }
      // Only implementation tau-moves remain; the normal state is stuck.
      std::unordered_set<ProductPair> seen{start};
      std::deque<ProductPair> queue{start};
      while (!queue.empty()) {
        ProductPair current = std::move(queue.front());
        queue.pop_front();
        CHECK_FALSE(is_fd_witness(current, pair.spec, pair.impl, impl_div));
        for (const Transition& t : pair.impl.out[current.impl]) {
          if (t.action != tau_action) {
            continue;
          }
          ProductPair next{current.spec, t.target};
          if (seen.insert(next).second) {
            queue.push_back(next);
          }
        }
      }
    }
  }
}

TEST_CASE("exploration terminates within the product bound") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto pair = fixtures::suite_pair(i);
    std::size_t bound =
        (std::size_t{1} << pair.spec.num_states) * pair.impl.num_states;
    for (Relation relation : all_relations) {
      for (Strategy strategy : all_strategies) {
        Verdict verdict =
            refines_improved(pair.spec, pair.impl, config_for(relation, strategy));
        CHECK(verdict.metrics.pairs_done <= bound);
      }
    }
  }
}

TEST_CASE("instrumented improved runs report no violations") {
  auto violation = fixtures::parse_pair(fixtures::violation_spec_aut,
                                        fixtures::violation_impl_aut);
  InstrumentedRun run = run_with_instrumentation(
      violation.spec, violation.impl,
      config_for(Relation::Trace, Strategy::DepthFirst));
  CHECK(run.verdict.refines);
  CHECK(run.total_violations == 0);

  auto lenient =
      fixtures::parse_pair(fixtures::atm_polling_aut, fixtures::atm_strict_aut);
  InstrumentedRun fdr_run = run_with_instrumentation(
      lenient.spec, lenient.impl,
      config_for(Relation::FailuresDivergences, Strategy::DepthFirst));
  CHECK(fdr_run.verdict.refines);
  CHECK(fdr_run.total_violations == 0);
}

TEST_CASE("the legacy run on the violation fixture breaks the antichain") {
  auto pair = fixtures::parse_pair(fixtures::violation_spec_aut,
                                   fixtures::violation_impl_aut);
  InstrumentedRun run = run_with_instrumentation(
      pair.spec, pair.impl,
      config_for(Relation::Trace, Strategy::DepthFirst, Variant::Legacy));
  CHECK(run.verdict.refines);
  REQUIRE(run.total_violations >= 1);

  bool properness_violated = false;
  for (const InstrumentationRecord& record : run.log) {
    for (const std::string& violation : record.violations) {
      if (violation.find("proper") != std::string::npos) {
        properness_violated = true;
      }
    }
  }
  CHECK(properness_violated);

  // The final antichain stores both comparable pairs.
  StateIndex t1 = 1, s1 = 1;
  bool has_small = false, has_large = false;
  for (const auto& [set, impl_state] : run.final_antichain) {
    if (impl_state == s1 && set == StateSet::of({t1})) {
      has_small = true;
    }
    if (impl_state == s1 && set == StateSet::of({t1, 2})) {
      has_large = true;
    }
  }
  CHECK(has_small);
  CHECK(has_large);
}

TEST_CASE("ladder self-refinement metrics, improved depth-first") {
  Lts ladder = gen_ladder(3, 2);
  ExplorationConfig config =
      config_for(Relation::Trace, Strategy::DepthFirst);
  config.want_counterexample = false;
  Verdict verdict = refines_improved(ladder, ladder, config);
  CHECK(verdict.refines);
  CHECK(verdict.metrics.working_max == 1);
  CHECK(verdict.metrics.antichain_hits + verdict.metrics.antichain_misses == 4);
  CHECK(verdict.metrics.antichain_misses == 2);

  Lts two_rungs = gen_ladder(2, 1);
  Verdict tiny = refines_improved(two_rungs, two_rungs, config);
  CHECK(tiny.refines);
  CHECK(tiny.metrics.working_max == 1);
}

TEST_CASE("ladder self-refinement worklist growth, legacy depth-first") {
  Lts ladder = gen_ladder(3, 2);
  InstrumentedRun run = run_with_instrumentation(
      ladder, ladder,
      config_for(Relation::Trace, Strategy::DepthFirst, Variant::Legacy));
  CHECK(run.verdict.refines);
  // Working size at the end of iteration i is i*(k-1)+1 while the
  // first pops walk down the ladder.
  REQUIRE(run.log.size() >= 2);
  CHECK(run.log[0].working_size == 2);
  CHECK(run.log[1].working_size == 3);
}

TEST_CASE("the node budget aborts runaway explorations") {
  Lts ladder = gen_ladder(6, 6);
  ExplorationConfig config =
      config_for(Relation::Trace, Strategy::BreadthFirst, Variant::Legacy);
  config.want_counterexample = false;
  config.node_budget = 100;
  CheckResult result = run_check(ladder, ladder, config);
  CHECK(result.budget_exceeded());

  ExplorationConfig improved = config_for(Relation::Trace, Strategy::BreadthFirst);
  improved.want_counterexample = false;
  improved.node_budget = 100;
  CheckResult completed = run_check(ladder, ladder, improved);
  CHECK_FALSE(completed.budget_exceeded());
  CHECK(completed.verdict.refines);
}

TEST_CASE("an implementation-only action is a trace violation") {
  auto pair = fixtures::parse_pair("des (0,1,2)\n(0,\"a\",1)\n",
                                   "des (0,2,2)\n(0,\"a\",1)\n(0,\"b\",1)\n");
  Verdict verdict = refines_improved(
      pair.spec, pair.impl, config_for(Relation::Trace, Strategy::BreadthFirst));
  CHECK_FALSE(verdict.refines);
  CHECK(verdict.witness_kind == WitnessKind::EmptySpec);
  REQUIRE(verdict.counterexample.has_value());
  CHECK(*verdict.counterexample == fixtures::trace_of(*pair.labels, {"b"}));
  CHECK_FALSE(oracle_refines(pair.spec, pair.impl, Relation::Trace));

  auto reversed = fixtures::parse_pair("des (0,2,2)\n(0,\"a\",1)\n(0,\"b\",1)\n",
                                       "des (0,1,2)\n(0,\"a\",1)\n");
  CHECK(refines_improved(reversed.spec, reversed.impl,
                         config_for(Relation::Trace, Strategy::BreadthFirst))
            .refines);
}

TEST_CASE("mismatched label tables are rejected") {
  Lts spec = fixtures::parse_one(fixtures::atm_spec_aut);
  Lts impl = fixtures::parse_one(fixtures::atm_strict_aut);
  CHECK_THROWS_AS(refines_improved(
                      spec, impl,
                      config_for(Relation::Trace, Strategy::DepthFirst)),
                  std::invalid_argument);
  CHECK_THROWS_AS(oracle_refines(spec, impl, Relation::Trace),
                  std::invalid_argument);
}

TEST_CASE("verdicts agree with the oracle on denser instances") {
  // Beyond the regular suite: up to 8 states and heavier tau use.
  std::mt19937_64 rng(0xABCD);
  for (int round = 0; round < 150; ++round) {
    auto labels = std::make_shared<LabelTable>();
    RandomLtsParams params;
    params.num_states = static_cast<StateIndex>(2 + rng() % 7);
    params.num_actions = 1 + rng() % 3;
    params.transition_density = 0.3 + 0.3 * static_cast<double>(rng() % 1000) / 1000.0;
    params.tau_density = 0.5 * static_cast<double>(rng() % 1000) / 1000.0;
    params.seed = rng();
    Lts spec = gen_random(params, labels);
    params.num_states = static_cast<StateIndex>(2 + rng() % 7);
    params.seed = rng();
    Lts impl = gen_random(params, labels);

    for (Relation relation : all_relations) {
      bool expected = oracle_refines(spec, impl, relation);
      for (Strategy strategy : all_strategies) {
        ExplorationConfig config = config_for(relation, strategy);
        config.want_counterexample = false;
        INFO("round ", round, " relation ", to_string(relation));
        CHECK(refines_improved(spec, impl, config).refines == expected);
      }
    }
  }
}

TEST_CASE("metrics invariants hold across the suite") {
  for (std::uint64_t i = 0; i < 80; ++i) {
    auto pair = fixtures::suite_pair(i);
    for (Variant variant : {Variant::Improved, Variant::Legacy}) {
      for (Relation relation : all_relations) {
        if (variant == Variant::Legacy && relation == Relation::FailuresDivergences) {
          continue;
        }
        ExplorationConfig config =
            config_for(relation, Strategy::DepthFirst, variant);
        config.want_counterexample = false;
        CheckResult result = run_check(pair.spec, pair.impl, config);
        const Metrics& m = result.verdict.metrics;
        CHECK(m.antichain_max <= m.antichain_hits + m.antichain_misses + 1);
      }
    }
  }
}
