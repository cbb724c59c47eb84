#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace refinekit {

using StateIndex = std::uint32_t;
using ActionIndex = std::uint32_t;

/// Index of the internal action in every label table.
inline constexpr ActionIndex tau_action = 0;

/// Maps action labels to dense indices. Index 0 is reserved for the
/// internal action; the configured tau name and the conventional "i"
/// both resolve to it. A table is shared between the two sides of a
/// refinement check so that action indices agree and the visible
/// alphabet is the union of the labels of both inputs.
class LabelTable {
public:
  explicit LabelTable(std::string tau_name = "tau");

  /// Returns the index for `label`, interning it if unseen.
  ActionIndex intern(std::string_view label);

  /// Returns the index for `label` or `size()` if not present.
  ActionIndex find(std::string_view label) const;

  const std::string& name(ActionIndex a) const { return names_[a]; }
  const std::string& tau_name() const { return tau_name_; }

  /// Number of entries including the internal action.
  std::size_t size() const { return names_.size(); }

  bool is_tau_label(std::string_view label) const;

private:
  std::vector<std::string> names_;
  std::string tau_name_;
};

struct Transition {
  ActionIndex action;
  StateIndex target;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// A finite labelled transition system. Transitions are kept per state
/// in declaration order, which fixes the tie-breaking of depth- and
/// breadth-first exploration. Values are immutable once built and safe
/// to share between threads.
struct Lts {
  StateIndex num_states = 0;
  StateIndex initial = 0;
  std::vector<std::vector<Transition>> out;  // indexed by source state
  std::shared_ptr<LabelTable> labels;

  std::size_t num_transitions() const;

  /// Visible alphabet size of the shared label table.
  std::size_t num_visible_actions() const { return labels->size() - 1; }
};

/// Canonical set of state indices: sorted and duplicate-free, so that
/// structural equality coincides with extensional equality.
class StateSet {
public:
  StateSet() = default;

  /// Builds the canonical form of an arbitrary index sequence.
  static StateSet of(std::vector<StateIndex> members);

  /// Wraps a vector that is already sorted and duplicate-free.
  static StateSet from_sorted(std::vector<StateIndex> members);

  bool empty() const { return members_.empty(); }
  std::size_t size() const { return members_.size(); }
  bool contains(StateIndex s) const;

  /// Subset test by a linear merge scan.
  bool subset_of(const StateSet& other) const;

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  const std::vector<StateIndex>& members() const { return members_; }

  friend bool operator==(const StateSet&, const StateSet&) = default;

private:
  std::vector<StateIndex> members_;
};

std::size_t hash_value(const StateSet& set);

/// Per-state divergence flags: diverging(s) holds iff s can reach a
/// tau-cycle (including a tau self-loop) via tau-transitions only.
struct DivergenceMarking {
  std::vector<char> diverging;

  bool operator()(StateIndex s) const { return diverging[s] != 0; }

  /// True iff some member of `set` diverges.
  bool any_of(const StateSet& set) const;
};

/// Actions enabled in state `s`, sorted; tau is included when present.
std::vector<ActionIndex> enabled(const Lts& lts, StateIndex s);

/// Visible actions enabled in `s` (tau filtered out), sorted.
std::vector<ActionIndex> enabled_visible(const Lts& lts, StateIndex s);

/// A state is stable iff it has no outgoing tau-transition.
bool is_stable(const Lts& lts, StateIndex s);

/// Least superset of `set` closed under tau-transitions.
StateSet tau_closure(const Lts& lts, const StateSet& set);

/// States reachable from `set` by the weak transition for visible
/// action `a`; expects `set` to be tau-closed.
StateSet weak_step(const Lts& lts, const StateSet& set, ActionIndex a);

/// Computes divergence flags via strongly-connected-component analysis
/// of the tau-subgraph followed by backward closure over tau-edges.
DivergenceMarking mark_divergent(const Lts& lts);

/// Restricts the LTS to the states reachable from the initial state,
/// renumbering them in discovery order.
Lts prune_unreachable(const Lts& lts);

}  // namespace refinekit

template <>
struct std::hash<refinekit::StateSet> {
  std::size_t operator()(const refinekit::StateSet& s) const {
    return refinekit::hash_value(s);
  }
};
