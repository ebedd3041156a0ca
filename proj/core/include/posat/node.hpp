// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "posat/chain.hpp"

namespace posat::node {

enum class ValidityReason {
  Ok,
  UnknownCoin,
  TimeOrder,
  Threshold,
  BadProof,
  UnknownParent,
};

const char* to_string(ValidityReason r);

/// Effects a node hands back to the simulator instead of doing I/O.
struct BroadcastEffect {
  Block block;
};
struct VdfStartEffect {
  CoinId coin = 0;
  std::uint64_t input = 0;   // rand_source the eval anchors at
  double stake_s = 1.0;
};
struct VdfResetEffect {
  CoinId coin = 0;
  bool rand_source_changed = false;
};
using Effect = std::variant<BroadcastEffect, VdfStartEffect, VdfResetEffect>;

enum class ResetPolicy { Continue, Restart };

struct Params {
  int c = 1;
  int k_confirm = 6;
  bool enforce_time_order = true;
  ResetPolicy reset_policy = ResetPolicy::Continue;
  const CoinTable* coins = nullptr;
};

/// Algorithm state of one honest node: its view of the tree, the parent it
/// mines on, and the epoch-gated randomness source.
struct NodeState {
  int node_id = 0;
  BlockTree view;
  BlockHash parent_blk = kGenesisHash;
  std::optional<std::uint64_t> rand_source;
  std::optional<std::uint64_t> slot;
  bool participate = false;
  std::set<TxId> uncnf_tx;
  std::vector<CoinId> coins;
  /// Blocks waiting for a parent, revalidated on its arrival.
  std::map<BlockHash, std::vector<Block>> orphans;
};

/// Sync-and-join. The node may only elect leaders after encountering an
/// epoch beginning; a tip that is an epoch-beginning block counts only if
/// the node joins at its arrival instant (or at genesis).
NodeState initialize(int node_id, const BlockTree& sync_view, double time,
                     const Params& params);

struct ReceiveResult {
  bool accepted = false;
  ValidityReason reason = ValidityReason::Ok;
  bool tip_changed = false;
  bool buffered = false;  // parent unknown, held as orphan
  std::vector<Effect> effects;
};

/// Validity per the receive path: known coin, strict slot ordering against
/// the parent, and the proof bit (stand-in for threshold + VDF verify in
/// the simulated realization). Precondition: parent present in view.
std::pair<bool, ValidityReason> is_valid_block(const BlockTree& view,
                                               const Block& block,
                                               const Params& params);

/// Full receive path: validate, insert, main-chain switch, randomness
/// update at epoch beginnings, participation gating, orphan replay.
ReceiveResult on_receive_block(NodeState& state, const Block& block,
                               double time, const Params& params);

struct StaleParent : std::runtime_error {
  StaleParent() : std::runtime_error("parent changed since eval started") {}
};

/// Outcome of a won election in the simulated realization.
struct WinResult {
  std::uint64_t output = 0;      // fresh randomness, becomes rand_source
  std::uint64_t slot_final = 0;
  std::uint64_t rand_iter = 1;
  BlockHash parent_at_start = kGenesisHash;
};

/// Builds and self-applies the block for a won election. Throws StaleParent
/// if the tip moved since the eval was anchored.
Block pos_leader_election_win(NodeState& state, const Coin& coin,
                              const WinResult& result, double time,
                              BlockHash new_hash, const Params& params);

/// Longest chain truncated by its last k blocks; genesis always confirmed.
std::vector<BlockHash> confirm_ledger(const BlockTree& view, BlockHash tip,
                                      int k);

struct NotEqualLength : std::runtime_error {
  NotEqualLength() : std::runtime_error("chains are not of equal length") {}
};

/// Adversary capability A4: retarget a node among equal-length longest
/// chains, overriding the sticky tie-break.
void honest_tip_switch(NodeState& state, BlockHash equal_tip);

}  // namespace posat::node
