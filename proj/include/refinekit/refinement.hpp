#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "refinekit/lts.hpp"
#include "refinekit/normalization.hpp"
#include "refinekit/relation.hpp"

namespace refinekit {

enum class Strategy { DepthFirst, BreadthFirst };
enum class Variant { Improved, Legacy };

/// Which local witness condition certified non-refinement.
enum class WitnessKind { EmptySpec, Refusal, Divergence };

struct Metrics {
  std::size_t working_max = 0;
  std::size_t antichain_hits = 0;
  std::size_t antichain_misses = 0;
  std::size_t antichain_max = 0;
  std::size_t pairs_done = 0;
};

struct ExplorationConfig {
  Relation relation = Relation::Trace;
  Strategy strategy = Strategy::BreadthFirst;
  Variant variant = Variant::Improved;

  /// Evaluate the loop invariants after every iteration (see
  /// run_with_instrumentation).
  bool invariant_checks = false;

  /// The legacy failures-divergences algorithm is unsound; it only runs
  /// when this acknowledgement is set.
  bool allow_unsound_legacy_fdr = false;

  /// Record parent links and produce a counterexample on failure.
  bool want_counterexample = true;

  /// Abort once more than this many pairs were pushed into the
  /// worklist; 0 means unlimited.
  std::size_t node_budget = 0;
};

struct Verdict {
  bool refines = false;
  std::optional<WitnessKind> witness_kind;
  /// Visible actions leading to the witness. Internally the path may
  /// contain tau-steps; only its visible projection is reported.
  std::optional<std::vector<ActionIndex>> counterexample;
  Metrics metrics;
};

enum class CheckStatus { Completed, BudgetExceeded };

struct CheckResult {
  CheckStatus status = CheckStatus::Completed;
  Verdict verdict;  // meaningful only when status == Completed

  bool budget_exceeded() const { return status == CheckStatus::BudgetExceeded; }
};

/// One snapshot of the loop state, taken after an iteration finished.
struct InstrumentationRecord {
  std::size_t iteration = 0;
  std::size_t working_size = 0;
  std::vector<std::string> violations;
};

struct InstrumentedRun {
  Verdict verdict;
  std::vector<InstrumentationRecord> log;
  std::size_t total_violations = 0;
  /// Antichain contents when the loop stopped.
  std::vector<std::pair<StateSet, StateIndex>> final_antichain;
};

/// Checks whether `spec` is refined by `impl` in the requested
/// semantics with the improved antichain algorithms: the antichain is
/// seeded with the initial pair and undiscovered successors are
/// inserted at push time, keeping worklist and antichain consistent.
Verdict refines_improved(const Lts& spec, const Lts& impl,
                         const ExplorationConfig& config);

/// The original antichain algorithms, kept for bug reproduction and
/// benchmarking: insertion happens at pop time, pushes are not
/// deduplicated against the worklist, refusal checks run without a
/// stability guard via a search for stable states, and the
/// failures-divergences variant retains its incorrect divergence test
/// order. Running the failures-divergences variant requires
/// config.allow_unsound_legacy_fdr.
Verdict refines_legacy(const Lts& spec, const Lts& impl,
                       const ExplorationConfig& config);

/// Dispatches on config.variant; honours config.node_budget.
CheckResult run_check(const Lts& spec, const Lts& impl,
                      const ExplorationConfig& config);

/// Runs the check while evaluating, after every iteration, the loop
/// invariants of the improved algorithms: worklist and processed pairs
/// pass antichain membership, the worklist holds no duplicates, no
/// processed pair is scheduled again, and the antichain is proper.
/// Violations are recorded, never fatal; the improved variants are
/// expected to log none, the legacy ones to log some.
InstrumentedRun run_with_instrumentation(const Lts& spec, const Lts& impl,
                                         const ExplorationConfig& config);

/// True iff every refusal of the (stable) implementation state is also
/// a refusal of the normal state: some stable member of `spec_state`
/// enables, visibly, at most what `impl_state` enables. Refusal
/// families are downward closed and generated by their maximal
/// refusals, so this one comparison decides the inclusion.
bool refusals_included(StateIndex impl_state, const NormState& spec_state,
                       const Lts& spec, const Lts& impl);

const char* to_string(WitnessKind kind);

}  // namespace refinekit
