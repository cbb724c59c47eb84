#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "refinekit/lts.hpp"
#include "refinekit/relation.hpp"

namespace refinekit {

using TraceVec = std::vector<ActionIndex>;

/// A refusal set, stored as the sorted visible actions it contains.
using Refusal = std::vector<ActionIndex>;

/// Definition-level observations of one LTS, bounded by a trace length.
/// Refusal families are downward closed, so failures keep only the
/// maximal refusals per trace (pairwise incomparable, sorted); a set X
/// is refused after rho iff it is a subset of some stored refusal.
struct Observation {
  std::set<TraceVec> weaktraces;
  std::set<TraceVec> divergences;
  std::set<TraceVec> min_divergences;
  std::map<TraceVec, std::vector<Refusal>> failures;
  std::map<TraceVec, std::vector<Refusal>> failures_bottom;

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Membership of (trace, refused) in the downward-closed family.
bool has_failure(const std::map<TraceVec, std::vector<Refusal>>& failures,
                 const TraceVec& trace, const Refusal& refused);

/// Exhaustive enumeration of all observations with traces of length at
/// most `bound`, by layer-wise expansion of tau-closed state sets.
/// Deliberately naive; the ground truth for everything else.
Observation observe(const Lts& lts, std::size_t bound);

inline constexpr std::size_t default_oracle_budget = 100000;

/// Thrown when an instance is too large for the brute-force oracle.
class OracleBudgetError : public std::runtime_error {
public:
  OracleBudgetError() : std::runtime_error("oracle too large") {}
};

/// 2^{spec states} * impl states: the size bound of the product of the
/// normalised specification with the implementation, within which any
/// distinguishing behaviour is witnessed. nullopt on overflow.
std::optional<std::uint64_t> oracle_state_bound(const Lts& spec, const Lts& impl);

/// Decides refinement directly from the definitions: the relevant
/// inclusions are evaluated over all traces up to the bound above,
/// walking spec and impl state sets in lockstep (repeated set pairs are
/// not re-expanded, which leaves the outcome unchanged). Throws
/// OracleBudgetError when the state bound exceeds `budget`.
bool oracle_refines(const Lts& spec, const Lts& impl, Relation relation,
                    std::size_t budget = default_oracle_budget);

/// Length, in visible actions, of a shortest trace of the full
/// (unpruned) product of the appropriate normal form with the
/// implementation that reaches a witness; nullopt when no witness is
/// reachable, i.e. when the refinement holds.
std::optional<std::size_t> shortest_witness_distance(
    const Lts& spec, const Lts& impl, Relation relation,
    std::size_t budget = default_oracle_budget);

}  // namespace refinekit
