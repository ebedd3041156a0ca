// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "posat/analysis.hpp"

using namespace posat;
using namespace posat::analysis;

namespace {

Block mk(BlockHash h, BlockHash parent, bool honest, double t) {
  Block b;
  b.hash = h;
  b.parent = parent;
  b.honest = honest;
  b.proposal_time = t;
  b.reveal_time = t;
  return b;
}

}  // namespace

TEST_CASE("step functions are right-continuous") {
  StepFunction f(0.0);
  f.add_jump(1.0, 2.0);
  f.add_jump(3.0, 5.0);
  CHECK(f.at(0.5) == 0.0);
  CHECK(f.at(1.0) == 2.0);  // value at the jump is the right limit
  CHECK(f.at(2.999) == 2.0);
  CHECK(f.at(3.0) == 5.0);
}

TEST_CASE("fictitious honest tree leveling") {
  // Two blocks within delta share level 1.
  auto f = fictitious_depth({1.0, 1.1}, 0.5);
  CHECK(f.at(0.9) == 0.0);
  CHECK(f.at(1.0) == 1.0);
  CHECK(f.at(5.0) == 1.0);

  // Separated blocks take consecutive levels.
  auto g = fictitious_depth({1.0, 2.0}, 0.5);
  CHECK(g.at(1.5) == 1.0);
  CHECK(g.at(2.0) == 2.0);

  // Degenerate delay: plain counting process.
  auto h = fictitious_depth({1.0, 2.0, 3.0}, 0.0);
  CHECK(h.at(2.5) == 2.0);
}

TEST_CASE("loner uses the closed interval") {
  const std::vector<double> times = {1.0, 2.0, 5.0};
  CHECK_FALSE(is_loner(0, times, 1.0));  // neighbor at exactly tau + delta
  CHECK_FALSE(is_loner(1, times, 1.0));
  CHECK(is_loner(2, times, 1.0));
  // Delta = 0 with distinct times: everyone is a loner.
  for (std::size_t j = 0; j < times.size(); ++j)
    CHECK(is_loner(j, times, 0.0));
}

TEST_CASE("partition assigns adversary blocks to the nearest honest root") {
  BlockTree tree;
  tree.insert(mk(1, kGenesisHash, true, 1.0));   // honest b_1
  tree.insert(mk(2, 1, true, 3.0));              // honest b_2
  tree.insert(mk(10, kGenesisHash, false, 1.5)); // adversary on genesis
  tree.insert(mk(11, 10, false, 2.5));
  tree.insert(mk(12, 2, false, 4.0));            // crosses honest b_2

  const auto view = partition_tree(tree, 0.0, 10.0);
  // Honest order: genesis(0), b_1(1), b_2(2).
  CHECK(view.tree_of.at(10) == 0);
  CHECK(view.tree_of.at(11) == 0);
  CHECK(view.tree_of.at(12) == 2);  // not genesis: path crosses b_2

  // D_0 steps 0 -> 1 -> 2 at the two adversary proposal times.
  CHECK(view.adversary_depth[0].at(1.4) == 0.0);
  CHECK(view.adversary_depth[0].at(1.5) == 1.0);
  CHECK(view.adversary_depth[0].at(2.5) == 2.0);
  // Every adversary block is in exactly one tree.
  CHECK(view.tree_of.size() == 3);
}

TEST_CASE("without adversary blocks every loner is Nakamoto-so-far") {
  BlockTree tree;
  tree.insert(mk(1, kGenesisHash, true, 1.0));
  tree.insert(mk(2, 1, true, 4.0));
  tree.insert(mk(3, 2, true, 9.0));
  const auto view = partition_tree(tree, 0.5, 12.0);
  const auto naka = nakamoto_blocks(view);
  CHECK(naka == std::set<std::size_t>{1, 2, 3});
}

TEST_CASE("an adversary tree catching up excludes later blocks") {
  BlockTree tree;
  tree.insert(mk(1, kGenesisHash, true, 1.0));
  tree.insert(mk(2, 1, true, 4.0));
  tree.insert(mk(3, 2, true, 9.0));
  // Adversary tree on genesis reaching depth 3 by t = 9.5: ties the honest
  // growth, so no earlier block can be Nakamoto afterwards.
  tree.insert(mk(10, kGenesisHash, false, 2.0));
  tree.insert(mk(11, 10, false, 6.0));
  tree.insert(mk(12, 11, false, 9.5));
  const auto view = partition_tree(tree, 0.0, 12.0);
  const auto naka = nakamoto_blocks(view);
  CHECK(naka.count(1) == 0);
  CHECK(naka.count(2) == 0);
  // Brute force agrees.
  CHECK(naka == nakamoto_blocks_bruteforce(view));
}

TEST_CASE("detectors agree on a handcrafted 5-honest/3-adversary trace") {
  BlockTree tree;
  tree.insert(mk(1, kGenesisHash, true, 1.0));
  tree.insert(mk(2, 1, true, 2.2));
  tree.insert(mk(3, 2, true, 4.8));
  tree.insert(mk(4, 3, true, 5.1));
  tree.insert(mk(5, 4, true, 8.0));
  tree.insert(mk(10, 1, false, 3.0));
  tree.insert(mk(11, 10, false, 5.5));
  tree.insert(mk(12, 3, false, 6.0));
  for (double delta : {0.0, 0.4, 1.5}) {
    const auto view = partition_tree(tree, delta, 10.0);
    CHECK(nakamoto_blocks(view) == nakamoto_blocks_bruteforce(view));
  }
}

TEST_CASE("ledger checks on simulated runs") {
  simnet::SimConfig cfg;
  cfg.seed = 21;
  cfg.duration = 120.0;
  cfg.tx_rate = 0.5;
  cfg.k_confirm = 3;
  const auto trace = simnet::run(cfg);
  const auto verdict = check_ledger(trace, cfg.delta, 60.0, cfg.k_confirm);
  CHECK(verdict.persistence_ok);
  CHECK(verdict.liveness_ok);

  // Starvation: an absurdly small u must violate liveness.
  const auto tight = check_ledger(trace, cfg.delta, 0.5, cfg.k_confirm);
  CHECK_FALSE(tight.liveness_ok);
}

TEST_CASE("nakamoto stability holds on valid traces, fails on corrupted") {
  simnet::SimConfig cfg;
  cfg.seed = 77;
  cfg.duration = 100.0;
  cfg.adversary_strategy = "private";
  cfg.adversary_schedule = simnet::RateSchedule::constant(0.3);
  const auto trace = simnet::run(cfg);
  const auto view = partition(trace);
  CHECK(nakamoto_stability_check(view, trace));

  simnet::SimConfig bad = cfg;
  bad.corrupt_view = true;
  const auto corrupted = simnet::run(bad);
  const auto bad_view = partition(corrupted);
  bool any_naka = false;
  for (bool b : bad_view.nakamoto) any_naka = any_naka || b;
  if (any_naka) CHECK_FALSE(nakamoto_stability_check(bad_view, corrupted));
}
