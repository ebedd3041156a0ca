// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "posat/adversary.hpp"
#include "posat/stats.hpp"

using namespace posat;

TEST_CASE("private attack preset wires the strategy") {
  const auto cfg = adversary::private_attack(1.0, 0.2, 1.0);
  CHECK(cfg.adversary_strategy == "private");
  CHECK(cfg.adversary_schedule.at(5.0) == doctest::Approx(0.2));
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("zero adversary rate can never succeed") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto out =
        races::private_race(1, 1e-12, 1.0, 0.0, 3, 50.0, seed, 64);
    CHECK_FALSE(out.success);
  }
}

TEST_CASE("costless simulation: baseline falls, sequential stands") {
  races::CostlessParams p;
  int vrf = 0, posat = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    if (adversary::costless_simulation_attack(
            adversary::Baseline::VrfLottery, p, seed, 800)
            .success)
      ++vrf;
    if (adversary::costless_simulation_attack(adversary::Baseline::Posat, p,
                                              seed, 800)
            .success)
      ++posat;
  }
  CHECK(vrf >= 18);
  CHECK(posat <= 1);
}

TEST_CASE("joining at t=0 reduces costless simulation to the private race") {
  races::CostlessParams p;
  p.t_join = 0.0;
  p.lambda_h_early = p.lambda_h_late = 1.0;
  p.lambda_a = 0.6;  // above the c=1 tolerance: should often succeed
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
    if (races::costless_race(false, p, seed, 800).success) ++wins;
  CHECK(wins >= 7);
}

TEST_CASE("enumeration only pays with time-ordering off; c=1 is a no-op") {
  std::vector<double> off, on;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto pair = adversary::enumeration_attack(false, 4, 0.3, 120.0,
                                                    seed, 800);
    off.push_back(pair.first);
    on.push_back(pair.second);
  }
  const auto t = stats::paired_t_greater(off, on, 0.05);
  CHECK(t.greater);

  // With enforcement the branches are rejected and both rates coincide.
  const auto enforced = adversary::enumeration_attack(true, 4, 0.3, 120.0,
                                                      7, 800);
  CHECK(enforced.first == enforced.second);

  // c = 1: nothing to enumerate, identical by construction.
  const auto c1 = races::enumeration_growth_pair(1, 0.3, 120.0, 7, 800);
  CHECK(c1.first == doctest::Approx(c1.second));
}

TEST_CASE("long-range attack dies with time ordering on") {
  int on_wins = 0, off_wins = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    if (adversary::long_range_attack(true, 4, 0.45, 1.0, 4, 120.0, seed, 800)
            .success)
      ++on_wins;
    if (adversary::long_range_attack(false, 4, 0.45, 1.0, 4, 120.0, seed, 800)
            .success)
      ++off_wins;
  }
  CHECK(on_wins == 0);
  CHECK(off_wins > 0);
}

TEST_CASE("sybil splitting leaves the growth distribution unchanged") {
  std::vector<double> single, split;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    single.push_back(races::sybil_depth_rate(2, 0.5, 1, 80.0, seed, 128));
    split.push_back(
        races::sybil_depth_rate(2, 0.5, 4, 80.0, seed + 1000, 128));
  }
  const auto ks = stats::ks_two_sample(single, split, 0.01);
  CHECK(ks.same);
}

TEST_CASE("A4 directive switches a node among equal tips") {
  BlockTree view;
  node::Params p;
  auto st = node::initialize(0, view, 0.0, p);
  Block a, b;
  a.hash = 1;
  a.parent = kGenesisHash;
  a.slot = 1;
  b.hash = 2;
  b.parent = kGenesisHash;
  b.slot = 2;
  node::on_receive_block(st, a, 1.0, p);
  node::on_receive_block(st, b, 1.0, p);
  adversary::honest_tip_switch(st, 2);
  CHECK(st.parent_blk == 2);
}
