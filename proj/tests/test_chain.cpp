// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "posat/chain.hpp"

using namespace posat;

namespace {

Block mk(BlockHash h, BlockHash parent, bool honest = true,
         double reveal = 0.0) {
  Block b;
  b.hash = h;
  b.parent = parent;
  b.honest = honest;
  b.proposal_time = reveal;
  b.reveal_time = reveal;
  return b;
}

}  // namespace

TEST_CASE("tree insertion recomputes levels and rejects bad links") {
  BlockTree t;
  CHECK(t.contains(kGenesisHash));
  CHECK(t.at(kGenesisHash).level == 0);

  t.insert(mk(1, kGenesisHash));
  t.insert(mk(2, 1));
  CHECK(t.at(2).level == 2);
  CHECK(t.max_level() == 2);

  CHECK_THROWS_AS(t.insert(mk(3, 99)), UnknownParent);
  CHECK_THROWS_AS(t.insert(mk(2, kGenesisHash)), DuplicateHash);

  const auto path = t.path_to(2);
  CHECK(path == std::vector<BlockHash>{kGenesisHash, 1, 2});
}

TEST_CASE("epoch beginnings are multiples of c") {
  CHECK(epoch_beginning(0, 3));
  CHECK(epoch_beginning(3, 3));
  CHECK_FALSE(epoch_beginning(4, 3));
  CHECK(epoch_beginning(7, 1));  // c=1: every level
}

TEST_CASE("longest chain tie-break: sticky, then reveal time, then hash") {
  BlockTree t;
  t.insert(mk(1, kGenesisHash, true, 1.0));
  t.insert(mk(2, kGenesisHash, true, 0.5));

  // Sticky: the current tip wins among equal-level chains.
  CHECK(longest_chain_tip(t, 1) == 1);
  CHECK(longest_chain_tip(t, 2) == 2);
  // From a stale tip the earliest reveal wins.
  CHECK(longest_chain_tip(t, kGenesisHash) == 2);

  // Equal reveal: lowest hash.
  BlockTree u;
  u.insert(mk(5, kGenesisHash, true, 1.0));
  u.insert(mk(4, kGenesisHash, true, 1.0));
  CHECK(longest_chain_tip(u, kGenesisHash) == 4);

  // A strictly longer chain always displaces the sticky tip.
  t.insert(mk(3, 2, true, 2.0));
  CHECK(longest_chain_tip(t, 1) == 3);
}

TEST_CASE("coin online windows") {
  Coin c;
  c.online_intervals = {{0.0, 10.0}, {20.0, 30.0}};
  CHECK(c.online_at(5.0));
  CHECK_FALSE(c.online_at(15.0));
  CHECK(c.online_over(2.0, 8.0));
  CHECK_FALSE(c.online_over(8.0, 22.0));
  CHECK(c.online_over(21.0, 29.0));
}
