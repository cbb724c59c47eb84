#pragma once

#include "refinekit/lts.hpp"

namespace refinekit {

/// Equivalence classes over the states of one LTS. Blocks are
/// non-empty, disjoint, and never mix diverging with non-diverging
/// states.
struct Partition {
  std::vector<StateIndex> block_of;
  StateIndex num_blocks = 0;
};

/// Coarsest partition stable under branching-bisimulation signatures
/// refined with a per-state divergence bit: the initial partition
/// splits on the divergence flag, then blocks are split until the
/// signature { (a, block(t)) | s =>eps s' -a-> t with the silent prefix
/// inside block(s), and (a != tau or block(t) != block(s')) } is
/// uniform within every block.
Partition dpbb_partition(const Lts& lts);

/// The quotient LTS: one state per block, a transition (B, a, B') iff
/// some member of B reaches some member of B' by a. Tau self-block
/// edges are dropped except on blocks containing a diverging state,
/// which keeps divergences intact.
Lts quotient(const Lts& lts, const Partition& partition);

/// dpbb_partition followed by quotient.
Lts minimise(const Lts& lts);

}  // namespace refinekit
