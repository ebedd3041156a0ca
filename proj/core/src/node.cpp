// SPDX-License-Identifier: Apache-2.0
#include "posat/node.hpp"

#include <algorithm>

namespace posat::node {

const char* to_string(ValidityReason r) {
  switch (r) {
    case ValidityReason::Ok: return "Ok";
    case ValidityReason::UnknownCoin: return "UnknownCoin";
    case ValidityReason::TimeOrder: return "TimeOrder";
    case ValidityReason::Threshold: return "Threshold";
    case ValidityReason::BadProof: return "BadProof";
    case ValidityReason::UnknownParent: return "UnknownParent";
  }
  return "?";
}

NodeState initialize(int node_id, const BlockTree& sync_view, double time,
                     const Params& params) {
  NodeState s;
  s.node_id = node_id;
  s.view = sync_view;
  s.parent_blk = longest_chain_tip(sync_view, sync_view.genesis());
  s.participate = false;

  const Block& tip = s.view.at(s.parent_blk);
  const bool tip_is_fresh =
      tip.hash == sync_view.genesis() ? time <= 0.0 : tip.reveal_time == time;
  if (epoch_beginning(tip.level, params.c) && tip_is_fresh) {
    s.rand_source = tip.rand_source;
    s.slot = tip.slot;
    s.participate = true;
  }
  return s;
}

std::pair<bool, ValidityReason> is_valid_block(const BlockTree& view,
                                               const Block& block,
                                               const Params& params) {
  if (!block.parent || !view.contains(*block.parent))
    return {false, ValidityReason::UnknownParent};
  if (params.coins != nullptr && params.coins->count(block.coin) == 0)
    return {false, ValidityReason::UnknownCoin};
  const Block& parent = view.at(*block.parent);
  if (params.enforce_time_order && parent.slot >= block.slot)
    return {false, ValidityReason::TimeOrder};
  if (!block.proof_ok) return {false, ValidityReason::BadProof};
  return {true, ValidityReason::Ok};
}

namespace {

void apply_accepted_block(NodeState& state, const Block& block,
                          const Params& params, ReceiveResult& out) {
  state.view.insert(block);
  const Block& inserted = state.view.at(block.hash);
  const Block& tip = state.view.at(state.parent_blk);

  if (inserted.level > tip.level) {
    state.parent_blk = inserted.hash;
    out.tip_changed = true;
    bool rand_source_changed = false;
    if (epoch_beginning(inserted.level, params.c)) {
      rand_source_changed = !state.rand_source ||
                            *state.rand_source != inserted.rand_source;
      state.rand_source = inserted.rand_source;
    }
    if (state.participate) {
      for (CoinId c : state.coins)
        out.effects.push_back(VdfResetEffect{c, rand_source_changed});
      if (rand_source_changed || params.reset_policy == ResetPolicy::Restart)
        for (CoinId c : state.coins)
          out.effects.push_back(
              VdfStartEffect{c, *state.rand_source, 0.0});
    } else if (epoch_beginning(inserted.level, params.c)) {
      state.slot = inserted.slot;
      state.participate = true;
      for (CoinId c : state.coins)
        out.effects.push_back(VdfStartEffect{c, *state.rand_source, 0.0});
    }
  }

  // Confirmed transactions do not need re-proposal; prune lazily from the
  // unconfirmed pool when they appear on the main chain.
  if (out.tip_changed)
    for (TxId tx : inserted.txs) state.uncnf_tx.erase(tx);
}

}  // namespace

ReceiveResult on_receive_block(NodeState& state, const Block& block,
                               double time, const Params& params) {
  ReceiveResult out;
  if (state.view.contains(block.hash)) {
    out.reason = ValidityReason::Ok;  // duplicate delivery, ignore
    return out;
  }
  if (!block.parent || !state.view.contains(*block.parent)) {
    state.orphans[block.parent.value_or(kGenesisHash)].push_back(block);
    out.reason = ValidityReason::UnknownParent;
    out.buffered = true;
    return out;
  }
  auto [ok, reason] = is_valid_block(state.view, block, params);
  out.reason = reason;
  if (!ok) return out;

  out.accepted = true;
  apply_accepted_block(state, block, params, out);

  // Replay orphans now that their parent is known.
  std::vector<Block> ready;
  auto it = state.orphans.find(block.hash);
  if (it != state.orphans.end()) {
    ready = std::move(it->second);
    state.orphans.erase(it);
  }
  for (const Block& orphan : ready) {
    ReceiveResult sub = on_receive_block(state, orphan, time, params);
    out.tip_changed = out.tip_changed || sub.tip_changed;
    for (auto& e : sub.effects) out.effects.push_back(std::move(e));
  }
  return out;
}

Block pos_leader_election_win(NodeState& state, const Coin& coin,
                              const WinResult& result, double time,
                              BlockHash new_hash, const Params& params) {
  if (result.parent_at_start != state.parent_blk) throw StaleParent();
  const Block& parent = state.view.at(state.parent_blk);

  Block b;
  b.hash = new_hash;
  b.parent = parent.hash;
  b.level = parent.level + 1;
  b.slot = result.slot_final;
  b.rand_source = result.output;  // intra-epoch self-update
  b.rand_iter = result.rand_iter;
  b.coin = coin.id;
  b.honest = true;
  b.proposal_time = time;
  b.reveal_time = time;  // honest blocks are revealed instantly
  b.txs.assign(state.uncnf_tx.begin(), state.uncnf_tx.end());

  state.view.insert(b);
  state.parent_blk = b.hash;
  state.rand_source = result.output;
  state.slot = result.slot_final;
  for (TxId tx : b.txs) state.uncnf_tx.erase(tx);
  (void)params;
  return b;
}

std::vector<BlockHash> confirm_ledger(const BlockTree& view, BlockHash tip,
                                      int k) {
  auto chain = longest_chain(view, tip);
  const std::size_t keep =
      chain.size() > static_cast<std::size_t>(k)
          ? chain.size() - static_cast<std::size_t>(k)
          : 1;  // genesis is always confirmed
  chain.resize(keep);
  return chain;
}

void honest_tip_switch(NodeState& state, BlockHash equal_tip) {
  const Block& cur = state.view.at(state.parent_blk);
  const Block& alt = state.view.at(equal_tip);
  if (cur.level != alt.level) throw NotEqualLength();
  state.parent_blk = equal_tip;
}

}  // namespace posat::node
