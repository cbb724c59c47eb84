#include "refinekit/lts.hpp"

#include <algorithm>
#include <cassert>

namespace refinekit {

LabelTable::LabelTable(std::string tau_name) : tau_name_(std::move(tau_name)) {
  names_.push_back(tau_name_);
}

bool LabelTable::is_tau_label(std::string_view label) const {
  return label == tau_name_ || label == "i";
}

ActionIndex LabelTable::intern(std::string_view label) {
  if (is_tau_label(label)) {
    return tau_action;
  }
  for (std::size_t i = 1; i < names_.size(); ++i) {
    if (names_[i] == label) {
      return static_cast<ActionIndex>(i);
    }
  }
  names_.emplace_back(label);
  return static_cast<ActionIndex>(names_.size() - 1);
}

ActionIndex LabelTable::find(std::string_view label) const {
  if (is_tau_label(label)) {
    return tau_action;
  }
  for (std::size_t i = 1; i < names_.size(); ++i) {
    if (names_[i] == label) {
      return static_cast<ActionIndex>(i);
    }
  }
  return static_cast<ActionIndex>(names_.size());
}

std::size_t Lts::num_transitions() const {
  std::size_t n = 0;
  for (const auto& ts : out) {
    n += ts.size();
  }
  return n;
}

StateSet StateSet::of(std::vector<StateIndex> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  StateSet set;
  set.members_ = std::move(members);
  return set;
}

StateSet StateSet::from_sorted(std::vector<StateIndex> members) {
  assert(std::is_sorted(members.begin(), members.end()));
  StateSet set;
  set.members_ = std::move(members);
  return set;
}

bool StateSet::contains(StateIndex s) const {
  return std::binary_search(members_.begin(), members_.end(), s);
}

bool StateSet::subset_of(const StateSet& other) const {
  auto it = other.members_.begin();
  for (StateIndex s : members_) {
    while (it != other.members_.end() && *it < s) {
      ++it;
    }
    if (it == other.members_.end() || *it != s) {
      return false;
    }
    ++it;
  }
  return true;
}

std::size_t hash_value(const StateSet& set) {
  // FNV-1a over the member indices.
  std::size_t h = 1469598103934665603ull;
  for (StateIndex s : set) {
    h ^= s;
    h *= 1099511628211ull;
  }
  return h;
}

bool DivergenceMarking::any_of(const StateSet& set) const {
  for (StateIndex s : set) {
    if (diverging[s]) {
      return true;
    }
  }
  return false;
}

std::vector<ActionIndex> enabled(const Lts& lts, StateIndex s) {
  assert(s < lts.num_states);
  std::vector<ActionIndex> actions;
  for (const Transition& t : lts.out[s]) {
    actions.push_back(t.action);
  }
  std::sort(actions.begin(), actions.end());
  actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
  return actions;
}

std::vector<ActionIndex> enabled_visible(const Lts& lts, StateIndex s) {
  std::vector<ActionIndex> actions = enabled(lts, s);
  if (!actions.empty() && actions.front() == tau_action) {
    actions.erase(actions.begin());
  }
  return actions;
}

bool is_stable(const Lts& lts, StateIndex s) {
  assert(s < lts.num_states);
  for (const Transition& t : lts.out[s]) {
    if (t.action == tau_action) {
      return false;
    }
  }
  return true;
}

StateSet tau_closure(const Lts& lts, const StateSet& set) {
  std::vector<char> seen(lts.num_states, 0);
  std::vector<StateIndex> stack;
  for (StateIndex s : set) {
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    StateIndex s = stack.back();
    stack.pop_back();
    for (const Transition& t : lts.out[s]) {
      if (t.action == tau_action && !seen[t.target]) {
        seen[t.target] = 1;
        stack.push_back(t.target);
      }
    }
  }
  std::vector<StateIndex> members;
  for (StateIndex s = 0; s < lts.num_states; ++s) {
    if (seen[s]) {
      members.push_back(s);
    }
  }
  return StateSet::from_sorted(std::move(members));
}

StateSet weak_step(const Lts& lts, const StateSet& set, ActionIndex a) {
  assert(a != tau_action);
  std::vector<StateIndex> successors;
  for (StateIndex s : set) {
    for (const Transition& t : lts.out[s]) {
      if (t.action == a) {
        successors.push_back(t.target);
      }
    }
  }
  return tau_closure(lts, StateSet::of(std::move(successors)));
}

namespace {

// Iterative Tarjan over the tau-subgraph. SCCs are emitted sinks-first,
// so the divergence flag of every tau-successor is known when an SCC is
// assigned.
struct TarjanState {
  const Lts& lts;
  std::vector<std::int64_t> index;
  std::vector<std::int64_t> lowlink;
  std::vector<char> on_stack;
  std::vector<StateIndex> stack;
  std::vector<char> diverging;
  std::int64_t next_index = 0;

  explicit TarjanState(const Lts& l)
      : lts(l),
        index(l.num_states, -1),
        lowlink(l.num_states, 0),
        on_stack(l.num_states, 0),
        diverging(l.num_states, 0) {}

  void run(StateIndex root) {
    struct Frame {
      StateIndex state;
      std::size_t edge;
    };
    std::vector<Frame> frames;
    frames.push_back({root, 0});
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;

    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& edges = lts.out[f.state];
      bool descended = false;
      while (f.edge < edges.size()) {
        const Transition& t = edges[f.edge++];
        if (t.action != tau_action) {
          continue;
        }
        if (index[t.target] < 0) {
          index[t.target] = lowlink[t.target] = next_index++;
          stack.push_back(t.target);
          on_stack[t.target] = 1;
          frames.push_back({t.target, 0});
          descended = true;
          break;
        }
        if (on_stack[t.target]) {
          lowlink[f.state] = std::min(lowlink[f.state], index[t.target]);
        }
      }
      if (descended) {
        continue;
      }
      StateIndex v = f.state;
      frames.pop_back();
      if (!frames.empty()) {
        StateIndex parent = frames.back().state;
        lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
      }
      if (lowlink[v] == index[v]) {
        std::vector<StateIndex> component;
        for (;;) {
          StateIndex w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          component.push_back(w);
          if (w == v) {
            break;
          }
        }
        assign(component);
      }
    }
  }

  void assign(const std::vector<StateIndex>& component) {
    // A multi-state tau-SCC is itself a tau-cycle. A singleton diverges
    // iff it carries a tau self-loop or a tau-edge into an already
    // diverging state.
    bool diverges = component.size() > 1;
    if (!diverges) {
      StateIndex s = component.front();
      for (const Transition& t : lts.out[s]) {
        if (t.action == tau_action && (t.target == s || diverging[t.target])) {
          diverges = true;
          break;
        }
      }
    }
    if (diverges) {
      for (StateIndex s : component) {
        diverging[s] = 1;
      }
    }
  }
};

}  // namespace

DivergenceMarking mark_divergent(const Lts& lts) {
  TarjanState tarjan(lts);
  for (StateIndex s = 0; s < lts.num_states; ++s) {
    if (tarjan.index[s] < 0) {
      tarjan.run(s);
    }
  }
  return DivergenceMarking{std::move(tarjan.diverging)};
}

Lts prune_unreachable(const Lts& lts) {
  std::vector<StateIndex> renumber(lts.num_states, lts.num_states);
  std::vector<StateIndex> order;
  renumber[lts.initial] = 0;
  order.push_back(lts.initial);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const Transition& t : lts.out[order[i]]) {
      if (renumber[t.target] == lts.num_states) {
        renumber[t.target] = static_cast<StateIndex>(order.size());
        order.push_back(t.target);
      }
    }
  }
  Lts pruned;
  pruned.num_states = static_cast<StateIndex>(order.size());
  pruned.initial = 0;
  pruned.labels = lts.labels;
  pruned.out.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const Transition& t : lts.out[order[i]]) {
      pruned.out[i].push_back({t.action, renumber[t.target]});
    }
  }
  return pruned;
}

}  // namespace refinekit
