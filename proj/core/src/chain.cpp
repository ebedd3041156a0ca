// SPDX-License-Identifier: Apache-2.0
#include "posat/chain.hpp"

#include <algorithm>

namespace posat {

const std::vector<BlockHash> BlockTree::kNoChildren{};

bool Coin::online_at(double t) const {
  for (const auto& [a, b] : online_intervals)
    if (t >= a && t < b) return true;
  return false;
}

bool Coin::online_over(double t0, double t1) const {
  // [t0, t1] must sit inside a single interval; intervals are disjoint.
  for (const auto& [a, b] : online_intervals)
    if (t0 >= a && t1 <= b) return true;
  return false;
}

Block make_genesis() {
  Block g;
  g.hash = kGenesisHash;
  g.parent.reset();
  g.level = 0;
  g.slot = 0;
  g.rand_source = 0;
  g.honest = true;
  return g;
}

BlockTree::BlockTree() : BlockTree(make_genesis()) {}

BlockTree::BlockTree(Block genesis) {
  genesis_ = genesis.hash;
  blocks_.emplace(genesis.hash, std::move(genesis));
}

void BlockTree::insert(const Block& block) {
  if (blocks_.count(block.hash)) throw DuplicateHash(block.hash);
  if (!block.parent) throw UnknownParent(block.hash);
  auto parent_it = blocks_.find(*block.parent);
  if (parent_it == blocks_.end()) throw UnknownParent(*block.parent);
  Block b = block;
  b.level = parent_it->second.level + 1;
  max_level_ = std::max(max_level_, b.level);
  children_[*b.parent].push_back(b.hash);
  blocks_.emplace(b.hash, std::move(b));
}

const Block& BlockTree::at(BlockHash h) const {
  auto it = blocks_.find(h);
  if (it == blocks_.end())
    throw std::out_of_range("no block " + std::to_string(h));
  return it->second;
}

const std::vector<BlockHash>& BlockTree::children_of(BlockHash h) const {
  auto it = children_.find(h);
  return it == children_.end() ? kNoChildren : it->second;
}

std::vector<BlockHash> BlockTree::path_to(BlockHash h) const {
  std::vector<BlockHash> path;
  BlockHash cur = h;
  while (true) {
    path.push_back(cur);
    const Block& b = at(cur);
    if (!b.parent) break;
    cur = *b.parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool epoch_beginning(std::uint32_t level, int c) {
  return level % static_cast<std::uint32_t>(c) == 0;
}

std::vector<BlockHash> longest_chain(const BlockTree& tree,
                                     BlockHash current_tip) {
  const std::uint32_t best = tree.max_level();
  if (tree.at(current_tip).level == best) return tree.path_to(current_tip);

  BlockHash chosen = tree.genesis();
  bool found = false;
  for (const auto& [h, b] : tree.blocks()) {
    if (b.level != best) continue;
    if (!found) {
      chosen = h;
      found = true;
      continue;
    }
    const Block& c = tree.at(chosen);
    if (b.reveal_time < c.reveal_time ||
        (b.reveal_time == c.reveal_time && h < chosen))
      chosen = h;
  }
  return tree.path_to(chosen);
}

BlockHash longest_chain_tip(const BlockTree& tree, BlockHash current_tip) {
  return longest_chain(tree, current_tip).back();
}

}  // namespace posat
