// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "posat/chain.hpp"
#include "posat/simnet.hpp"

namespace posat::analysis {

/// Right-continuous step function: value(t) = values[last jump <= t],
/// initial value before the first jump.
class StepFunction {
 public:
  StepFunction() = default;
  explicit StepFunction(double initial) : initial_(initial) {}

  /// Jumps must be appended in nondecreasing time order.
  void add_jump(double time, double value);
  double at(double t) const;
  const std::vector<double>& jump_times() const { return times_; }
  const std::vector<double>& jump_values() const { return values_; }

 private:
  double initial_ = 0.0;
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Blocktree partition: each adversary block belongs to the tree of the
/// unique honest ancestor reachable without crossing another honest block.
struct PartitionView {
  double delta = 0.0;
  double horizon = 0.0;
  std::vector<BlockHash> honest_blocks;  // sorted by proposal time, [0]=genesis
  std::vector<double> honest_times;
  std::map<BlockHash, std::size_t> tree_of;  // adversary block -> honest index
  std::vector<StepFunction> adversary_depth;  // D_i per honest index
  StepFunction fictitious;                    // D_h
  std::vector<bool> loner;
  std::vector<bool> nakamoto;  // Nakamoto-so-far over the finite horizon
};

PartitionView partition(const simnet::Trace& trace);
/// Same computation from a bare tree (hand-built traces in tests).
PartitionView partition_tree(const BlockTree& tree, double delta,
                             double horizon);

/// Greedy Delta-window leveling of honest proposal times: the first block
/// and everything within Delta of it form level 1, the next later block
/// starts level 2, and so on.
StepFunction fictitious_depth(const std::vector<double>& honest_times,
                              double delta);

/// No other honest block proposed in the closed interval [t_j-Delta, t_j+Delta].
bool is_loner(std::size_t j, const std::vector<double>& honest_times,
              double delta);

/// Incremental detector: checks the race condition only where it can newly
/// fail (the window boundary and each adversary-depth jump).
std::set<std::size_t> nakamoto_blocks(const PartitionView& view);

/// Independent oracle: evaluates the race condition on a dense grid of all
/// event times and midpoints. Quadratic; for small traces only.
std::set<std::size_t> nakamoto_blocks_bruteforce(const PartitionView& view);

struct LedgerVerdict {
  bool persistence_ok = true;
  std::string first_violation;
  bool liveness_ok = true;
  double worst_inclusion_delay = 0.0;
  double tau = 0.0;
  double u = 0.0;
};

LedgerVerdict check_ledger(const simnet::Trace& trace, double tau, double u,
                           int k);

/// Hard assertion: every detected Nakamoto block is on every honest node's
/// longest chain at every sampled time after its window. False indicates a
/// simulator or analyzer bug, never expected statistics.
bool nakamoto_stability_check(const PartitionView& view,
                              const simnet::Trace& trace);

std::string analysis_json(const PartitionView& view,
                          const LedgerVerdict& verdict, bool stability);

}  // namespace posat::analysis
