#pragma once

#include <optional>
#include <unordered_map>
#include <utility>

#include "refinekit/lts.hpp"

namespace refinekit {

/// A state of the on-the-fly normal form: a tau-closed canonical set of
/// specification states together with its divergence flag. The empty
/// set is a valid normal state.
struct NormState {
  StateSet states;
  bool diverges = false;

  friend bool operator==(const NormState& a, const NormState& b) {
    return a.states == b.states;
  }
};

/// Memoised successor computation for the normal form of one LTS. The
/// full normal form is never materialised; only the queried fragment
/// exists, cached per (state set, action) for the lifetime of the
/// session. A session owns mutable state and is single-owner; distinct
/// sessions are independent.
class NormContext {
public:
  NormContext(const Lts& lts, const DivergenceMarking& marking);

  /// tau_closure of the initial state, flagged.
  NormState initial() const;

  /// The unique successor of `from` under visible action `a`. Defined
  /// for every action; the empty state is absorbing.
  const NormState& successor(const NormState& from, ActionIndex a);

  /// Successor in the failures-divergences normal form: diverging
  /// states have no outgoing transitions, signalled by nullopt.
  std::optional<NormState> fdr_successor(const NormState& from, ActionIndex a);

  /// Flags an arbitrary tau-closed set.
  NormState flag(StateSet states) const;

  const Lts& lts() const { return lts_; }
  const DivergenceMarking& marking() const { return marking_; }

private:
  struct KeyHash {
    std::size_t operator()(const std::pair<StateSet, ActionIndex>& key) const {
      return hash_value(key.first) * 31 + key.second;
    }
  };

  const Lts& lts_;
  const DivergenceMarking& marking_;
  std::unordered_map<std::pair<StateSet, ActionIndex>, NormState, KeyHash> memo_;
};

}  // namespace refinekit
