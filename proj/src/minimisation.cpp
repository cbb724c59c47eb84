#include "refinekit/minimisation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace refinekit {

namespace {

using Signature = std::vector<std::pair<ActionIndex, StateIndex>>;

// Signature of s against the current partition: observable moves after
// an inert tau-prefix, with inert tau-steps themselves excluded.
Signature signature_of(const Lts& lts, const std::vector<StateIndex>& block_of,
                       StateIndex s) {
  const StateIndex own_block = block_of[s];
  std::vector<char> seen(lts.num_states, 0);
  std::vector<StateIndex> stack{s};
  seen[s] = 1;
  std::set<std::pair<ActionIndex, StateIndex>> sig;
  while (!stack.empty()) {
    StateIndex current = stack.back();
    stack.pop_back();
    for (const Transition& t : lts.out[current]) {
      if (t.action == tau_action && block_of[t.target] == own_block) {
        if (!seen[t.target]) {
          seen[t.target] = 1;
          stack.push_back(t.target);
        }
        continue;  // inert step, invisible
      }
      sig.insert({t.action, block_of[t.target]});
    }
  }
  return Signature(sig.begin(), sig.end());
}

}  // namespace

Partition dpbb_partition(const Lts& lts) {
  const DivergenceMarking marking = mark_divergent(lts);

  Partition partition;
  partition.block_of.resize(lts.num_states);
  {
    // Initial split on the divergence flag, block ids in order of first
    // occurrence so the numbering is deterministic.
    std::map<bool, StateIndex> ids;
    for (StateIndex s = 0; s < lts.num_states; ++s) {
      auto [it, inserted] = ids.insert({marking(s), partition.num_blocks});
      if (inserted) {
        ++partition.num_blocks;
      }
      partition.block_of[s] = it->second;
    }
  }

  for (;;) {
    std::map<std::pair<StateIndex, Signature>, StateIndex> ids;
    std::vector<StateIndex> next(lts.num_states);
    StateIndex next_blocks = 0;
    for (StateIndex s = 0; s < lts.num_states; ++s) {
      auto key = std::make_pair(partition.block_of[s],
                                signature_of(lts, partition.block_of, s));
      auto [it, inserted] = ids.insert({std::move(key), next_blocks});
      if (inserted) {
        ++next_blocks;
      }
      next[s] = it->second;
    }
    if (next_blocks == partition.num_blocks) {
      return partition;
    }
    partition.block_of = std::move(next);
    partition.num_blocks = next_blocks;
  }
}

Lts quotient(const Lts& lts, const Partition& partition) {
  const DivergenceMarking marking = mark_divergent(lts);
  std::vector<char> block_diverges(partition.num_blocks, 0);
  for (StateIndex s = 0; s < lts.num_states; ++s) {
    if (marking(s)) {
      block_diverges[partition.block_of[s]] = 1;
    }
  }

  std::vector<std::set<std::pair<ActionIndex, StateIndex>>> edges(
      partition.num_blocks);
  for (StateIndex s = 0; s < lts.num_states; ++s) {
    StateIndex from = partition.block_of[s];
    for (const Transition& t : lts.out[s]) {
      StateIndex to = partition.block_of[t.target];
      if (t.action == tau_action && from == to && !block_diverges[from]) {
        continue;  // inert tau inside a non-diverging block
      }
      edges[from].insert({t.action, to});
    }
  }

  Lts result;
  result.num_states = partition.num_blocks;
  result.initial = partition.block_of[lts.initial];
  result.labels = lts.labels;
  result.out.resize(partition.num_blocks);
  for (StateIndex b = 0; b < partition.num_blocks; ++b) {
    for (const auto& [action, target] : edges[b]) {
      result.out[b].push_back({action, target});
    }
  }
  return result;
}

Lts minimise(const Lts& lts) { return quotient(lts, dpbb_partition(lts)); }

}  // namespace refinekit
