// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace posat::brw {

/// One node of a superblock-level front, with a backpointer into the
/// previous level so a deepest chain can be reconstructed for reveal.
struct PathNode {
  double time = 0.0;
  int parent = -1;
};

/// Beam-limited front of a private adversary tree, in superblock form
/// (each generation is c real block levels; generation 1 carries the
/// gifted c-1 levels). levels[k] holds the beam_width earliest arrivals of
/// generation k+1, in time order.
struct FrontTree {
  int c = 1;
  std::vector<std::vector<PathNode>> levels;

  /// Q*_k: earliest arrival per generation (1-based generation k at [k-1]).
  std::vector<double> front_times() const;

  /// Depth in real block levels at time t.
  int depth_at(double t) const;

  /// Superblock arrival times along the earliest chain reaching the deepest
  /// generation arrived by t (front to back: generation 1..K).
  std::vector<double> best_path(double t) const;
};

/// Deterministic in (seed); grows generation by generation until no arrival
/// lands inside the horizon. streams_per_parent > 1 models enumeration over
/// the epoch's randomness choices (time-ordering disabled).
FrontTree grow_front_tree(int c, double lambda_a, double horizon,
                          std::uint64_t seed, int beam_width,
                          int streams_per_parent = 1);

}  // namespace posat::brw
