#pragma once

#include <cstdint>
#include <memory>

#include "refinekit/lts.hpp"

namespace refinekit {

/// The ladder family: states s_1..s_n, initial s_n, and transitions
/// s_i -a_j-> s_{i-1} for every 1 <= j <= k and 1 < i <= n. The result
/// is deterministic, tau-free and has exactly k*(n-1) transitions.
/// State s_i is index i-1, so the initial state is index n-1.
Lts gen_ladder(StateIndex n, std::size_t k);

struct RandomLtsParams {
  StateIndex num_states = 1;
  std::size_t num_actions = 1;
  double transition_density = 0.0;  // chance of a visible edge per (state, action)
  double tau_density = 0.0;         // chance of a tau edge per state
  std::uint64_t seed = 0;
};

/// Seeded random LTS; identical parameters give an identical result.
/// Unreachable states are pruned away. When `labels` is null a fresh
/// table with actions a1..a<num_actions> is created.
Lts gen_random(const RandomLtsParams& params,
               std::shared_ptr<LabelTable> labels = nullptr);

/// Seeded copy of `lts` with roughly `drop_fraction` of the transitions
/// removed; handy for producing implementation candidates that are
/// likely to refine the original.
Lts drop_random_transitions(const Lts& lts, double drop_fraction,
                            std::uint64_t seed);

}  // namespace refinekit
