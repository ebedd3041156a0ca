// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace posat {

using BlockHash = std::uint64_t;
using CoinId = std::uint32_t;
using TxId = std::uint64_t;

constexpr BlockHash kGenesisHash = 0;

/// A staked coin. Stake is expressed directly in leader-election rate units
/// (stake 1.0 wins elections at rate 1.0/s when p_unit maps one stake unit
/// to the per-iteration win probability).
struct Coin {
  CoinId id = 0;
  double stake = 1.0;
  bool honest = true;
  /// Disjoint, sorted [start, end) online intervals in seconds.
  std::vector<std::pair<double, double>> online_intervals;

  bool online_at(double t) const;
  /// Online continuously over the whole closed window [t0, t1].
  bool online_over(double t0, double t1) const;
};

using CoinTable = std::map<CoinId, Coin>;

struct Block {
  BlockHash hash = 0;
  std::optional<BlockHash> parent;  // absent only for genesis
  std::uint32_t level = 0;
  std::uint64_t slot = 0;       // VDF iteration count since genesis
  std::uint64_t rand_source = 0;  // opaque randomness carried by the block
  std::uint64_t rand_iter = 1;
  std::vector<std::uint8_t> proof;  // hash-chain realization only
  bool proof_ok = true;             // opaque validity bit (simulated mode)
  CoinId coin = 0;
  bool honest = true;
  double proposal_time = 0.0;
  double reveal_time = 0.0;
  std::vector<TxId> txs;
};

struct UnknownParent : std::runtime_error {
  explicit UnknownParent(BlockHash h)
      : std::runtime_error("unknown parent of block " + std::to_string(h)) {}
};
struct DuplicateHash : std::runtime_error {
  explicit DuplicateHash(BlockHash h)
      : std::runtime_error("duplicate block hash " + std::to_string(h)) {}
};

/// The block DAG restricted to a tree: one genesis root, every other block
/// has a present parent, children kept in insertion order.
class BlockTree {
 public:
  BlockTree();
  explicit BlockTree(Block genesis);

  /// Inserts a block. Throws UnknownParent / DuplicateHash.
  void insert(const Block& block);

  bool contains(BlockHash h) const { return blocks_.count(h) != 0; }
  const Block& at(BlockHash h) const;
  const std::vector<BlockHash>& children_of(BlockHash h) const;
  BlockHash genesis() const { return genesis_; }
  std::size_t size() const { return blocks_.size(); }
  const std::map<BlockHash, Block>& blocks() const { return blocks_; }

  /// Path genesis -> h.
  std::vector<BlockHash> path_to(BlockHash h) const;
  std::uint32_t max_level() const { return max_level_; }

 private:
  std::map<BlockHash, Block> blocks_;
  std::map<BlockHash, std::vector<BlockHash>> children_;
  BlockHash genesis_ = kGenesisHash;
  std::uint32_t max_level_ = 0;
  static const std::vector<BlockHash> kNoChildren;
};

Block make_genesis();

/// True iff `level` starts an epoch for correlation parameter c (level 0,
/// i.e. genesis, always does).
bool epoch_beginning(std::uint32_t level, int c);

/// Longest chain selection with the deterministic tie-break: keep the chain
/// through current_tip if it is among the level maxima, otherwise pick the
/// maximal tip with the earliest reveal_time, then the lowest hash.
std::vector<BlockHash> longest_chain(const BlockTree& tree,
                                     BlockHash current_tip);

/// Terminal block of longest_chain().
BlockHash longest_chain_tip(const BlockTree& tree, BlockHash current_tip);

}  // namespace posat
