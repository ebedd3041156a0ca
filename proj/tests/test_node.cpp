// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "posat/node.hpp"

using namespace posat;
using namespace posat::node;

namespace {

Block mk(BlockHash h, BlockHash parent, std::uint64_t slot,
         std::uint64_t rand_source = 1, bool honest = true) {
  Block b;
  b.hash = h;
  b.parent = parent;
  b.slot = slot;
  b.rand_source = rand_source;
  b.honest = honest;
  return b;
}

Params params_c(int c) {
  Params p;
  p.c = c;
  p.k_confirm = 2;
  return p;
}

}  // namespace

TEST_CASE("initialize: genesis sync participates immediately") {
  BlockTree view;
  auto st = initialize(0, view, 0.0, params_c(2));
  CHECK(st.participate);
  CHECK(st.parent_blk == kGenesisHash);
  CHECK(st.rand_source.has_value());
}

TEST_CASE("initialize: mid-epoch join must wait for an epoch beginning") {
  BlockTree view;
  view.insert(mk(1, kGenesisHash, 10));  // level 1 is mid-epoch for c=2
  auto st = initialize(0, view, 5.0, params_c(2));
  CHECK_FALSE(st.participate);

  // Receiving the next epoch beginning grants participation.
  auto r = on_receive_block(st, mk(2, 1, 20), 6.0, params_c(2));
  CHECK(r.accepted);
  CHECK(st.participate);
  CHECK(st.rand_source.has_value());
}

TEST_CASE("validation reasons") {
  BlockTree view;
  view.insert(mk(1, kGenesisHash, 10));
  Params p = params_c(1);

  auto bad_slot = mk(2, 1, 10);  // not strictly increasing
  CHECK(is_valid_block(view, bad_slot, p) ==
        std::pair<bool, ValidityReason>{false, ValidityReason::TimeOrder});

  p.enforce_time_order = false;
  CHECK(is_valid_block(view, bad_slot, p).first);
  p.enforce_time_order = true;

  auto bad_proof = mk(2, 1, 11);
  bad_proof.proof_ok = false;
  CHECK(is_valid_block(view, bad_proof, p).second == ValidityReason::BadProof);

  auto orphan = mk(3, 99, 12);
  CHECK(is_valid_block(view, orphan, p).second ==
        ValidityReason::UnknownParent);

  CoinTable coins;
  p.coins = &coins;  // empty table: every coin unknown
  CHECK(is_valid_block(view, mk(2, 1, 11), p).second ==
        ValidityReason::UnknownCoin);
}

TEST_CASE("receive path: longer chain switch and epoch randomness update") {
  BlockTree view;
  auto st = initialize(0, view, 0.0, params_c(2));
  st.coins = {1};

  auto r1 = on_receive_block(st, mk(1, kGenesisHash, 10, 111), 1.0,
                             params_c(2));
  CHECK(r1.accepted);
  CHECK(r1.tip_changed);
  // Level 1 is mid-epoch: randomness must not change.
  const auto before = *st.rand_source;
  CHECK(before != 111);

  auto r2 = on_receive_block(st, mk(2, 1, 20, 222), 2.0, params_c(2));
  CHECK(r2.accepted);
  CHECK(*st.rand_source == 222);  // level 2 is an epoch beginning
  bool saw_reset = false;
  for (const auto& e : r2.effects)
    if (std::holds_alternative<VdfResetEffect>(e))
      saw_reset = std::get<VdfResetEffect>(e).rand_source_changed;
  CHECK(saw_reset);

  // A shorter fork never switches the tip.
  auto r3 = on_receive_block(st, mk(3, kGenesisHash, 15), 3.0, params_c(2));
  CHECK(r3.accepted);
  CHECK_FALSE(r3.tip_changed);
  CHECK(st.parent_blk == 2);
}

TEST_CASE("orphans are buffered and replayed") {
  BlockTree view;
  auto st = initialize(0, view, 0.0, params_c(1));
  auto r = on_receive_block(st, mk(2, 1, 20), 1.0, params_c(1));
  CHECK_FALSE(r.accepted);
  CHECK(r.buffered);
  CHECK(st.orphans.size() == 1);

  auto r2 = on_receive_block(st, mk(1, kGenesisHash, 10), 2.0, params_c(1));
  CHECK(r2.accepted);
  CHECK(st.orphans.empty());
  CHECK(st.view.contains(2));
  CHECK(st.parent_blk == 2);
}

TEST_CASE("duplicate deliveries are ignored") {
  BlockTree view;
  auto st = initialize(0, view, 0.0, params_c(1));
  CHECK(on_receive_block(st, mk(1, kGenesisHash, 10), 1.0, params_c(1))
            .accepted);
  auto dup = on_receive_block(st, mk(1, kGenesisHash, 10), 1.5, params_c(1));
  CHECK_FALSE(dup.accepted);
  CHECK_FALSE(dup.buffered);
}

TEST_CASE("won election extends own tip and self-updates randomness") {
  BlockTree view;
  auto st = initialize(0, view, 0.0, params_c(2));
  st.uncnf_tx = {7, 8};
  Coin coin;
  coin.id = 1;

  WinResult w;
  w.output = 999;
  w.slot_final = 12;
  w.parent_at_start = kGenesisHash;
  Block b = pos_leader_election_win(st, coin, w, 3.0, 50, params_c(2));
  CHECK(b.level == 1);
  CHECK(b.txs.size() == 2);
  CHECK(st.parent_blk == 50);
  CHECK(*st.rand_source == 999);  // own win always refreshes
  CHECK(st.uncnf_tx.empty());

  WinResult stale;
  stale.parent_at_start = kGenesisHash;  // tip moved to 50 meanwhile
  CHECK_THROWS_AS(
      pos_leader_election_win(st, coin, stale, 4.0, 51, params_c(2)),
      StaleParent);
}

TEST_CASE("confirmed ledger drops the last k blocks, keeps genesis") {
  BlockTree view;
  auto st = initialize(0, view, 0.0, params_c(1));
  BlockHash parent = kGenesisHash;
  for (BlockHash h = 1; h <= 5; ++h) {
    on_receive_block(st, mk(h, parent, 10 * h), 1.0, params_c(1));
    parent = h;
  }
  const auto confirmed = confirm_ledger(st.view, 5, 2);
  CHECK(confirmed == std::vector<BlockHash>{kGenesisHash, 1, 2, 3});
  CHECK(confirm_ledger(st.view, 1, 6) == std::vector<BlockHash>{kGenesisHash});
}

TEST_CASE("A4 tip switching requires equal length") {
  BlockTree view;
  auto st = initialize(0, view, 0.0, params_c(1));
  on_receive_block(st, mk(1, kGenesisHash, 10), 1.0, params_c(1));
  on_receive_block(st, mk(2, kGenesisHash, 11), 1.0, params_c(1));
  CHECK(st.parent_blk == 1);  // sticky
  honest_tip_switch(st, 2);
  CHECK(st.parent_blk == 2);
  on_receive_block(st, mk(3, 2, 20), 2.0, params_c(1));
  CHECK_THROWS_AS(honest_tip_switch(st, 1), NotEqualLength);
}
