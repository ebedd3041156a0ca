// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <cmath>

#include "posat/simnet.hpp"

using namespace posat;
using namespace posat::simnet;

TEST_CASE("config validation") {
  SimConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.c = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigInvalid);
  cfg.c = 1;
  cfg.delta = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigInvalid);
  cfg.delta = 0.0;
  cfg.adversary_strategy = "mystery";
  CHECK_THROWS_AS(cfg.validate(), ConfigInvalid);

  CHECK_THROWS_AS(SimConfig::from_json("{ not json"), ConfigInvalid);
  CHECK_THROWS_AS(SimConfig::from_json("{\"c\": -3}"), ConfigInvalid);
}

TEST_CASE("config JSON roundtrip") {
  SimConfig cfg;
  cfg.c = 3;
  cfg.delta = 0.7;
  cfg.honest_schedule.steps = {{0.0, 1.0}, {10.0, 2.0}};
  cfg.lambda_max = 2.0;
  cfg.delay_policy = DelayPolicy::Split;
  cfg.strategy_params["target_depth_margin"] = 2.0;
  const auto back = SimConfig::from_json(cfg.to_json());
  CHECK(back.to_json() == cfg.to_json());
}

TEST_CASE("honest-only run: single chain growing at the Poisson rate") {
  SimConfig cfg;
  cfg.seed = 99;
  cfg.duration = 400.0;
  cfg.honest_schedule = RateSchedule::constant(1.5);
  cfg.lambda_max = 1.5;
  const auto trace = run(cfg);
  CHECK(trace.max_fork_depth == 0);
  CHECK(trace.violations.empty());
  const double len = static_cast<double>(trace.final_tips[0].size() - 1);
  const double mean = 1.5 * cfg.duration;
  CHECK(std::abs(len - mean) < 3.0 * std::sqrt(mean));
}

TEST_CASE("large delay with several nodes produces forks") {
  SimConfig cfg;
  cfg.seed = 4;
  cfg.duration = 150.0;
  cfg.num_nodes = 3;
  cfg.delta = 4.0;
  // With lambda * delta = 8 forks run deep; confirm far enough behind the
  // tip that the confirmed prefix stays stable despite them.
  cfg.k_confirm = 40;
  cfg.honest_schedule = RateSchedule::constant(2.0);
  const auto trace = run(cfg);
  CHECK(trace.max_fork_depth >= 1);
  CHECK(trace.violations.empty());  // forks are not violations
}

TEST_CASE("same config and seed give byte-identical traces") {
  SimConfig cfg;
  cfg.seed = 31337;
  cfg.duration = 50.0;
  cfg.num_nodes = 2;
  cfg.delta = 0.3;
  cfg.tx_rate = 1.0;
  cfg.adversary_strategy = "private";
  cfg.adversary_schedule = RateSchedule::constant(0.4);
  const auto a = run(cfg).to_jsonl();
  const auto b = run(cfg).to_jsonl();
  CHECK(a == b);
  // Trace serialization roundtrips to the same bytes.
  CHECK(Trace::from_jsonl(a).to_jsonl() == a);
}

TEST_CASE("adversary blocks stay private until their reveal event") {
  SimConfig cfg;
  cfg.seed = 12;
  cfg.duration = 120.0;
  cfg.k_confirm = 3;
  cfg.adversary_strategy = "private";
  cfg.adversary_schedule = RateSchedule::constant(0.8);  // strong adversary
  const auto trace = run(cfg);
  bool saw_adversary = false;
  for (const auto& b : trace.blocks) {
    if (b.honest) continue;
    saw_adversary = true;
    CHECK(b.reveal_time >= b.proposal_time);
  }
  CHECK(saw_adversary);
}

TEST_CASE("strong adversary eventually displaces confirmed blocks") {
  int successes = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SimConfig cfg;
    cfg.seed = seed;
    cfg.duration = 150.0;
    cfg.k_confirm = 2;
    cfg.honest_schedule = RateSchedule::constant(0.5);
    cfg.adversary_strategy = "private";
    cfg.adversary_schedule = RateSchedule::constant(0.6);
    const auto trace = run(cfg);
    if (trace.outcome.success) ++successes;
  }
  CHECK(successes >= 3);
}

TEST_CASE("lambda_h_c excludes recent joiners for c > 1") {
  SimConfig cfg;
  cfg.c = 3;
  cfg.delta = 1.0;
  cfg.kappa = 9.0;
  cfg.lambda_min = 1.0;
  cfg.duration = 200.0;
  cfg.honest_schedule.steps = {{0.0, 1.0}, {100.0, 2.0}};
  cfg.lambda_max = 2.0;
  const auto coins = synthesize_coins(cfg.honest_schedule, cfg.duration);
  // sigma(3) = 2 * (1 + 10) = 22.
  CHECK(lambda_h_c(cfg, coins, 90.0) == doctest::Approx(1.0));
  CHECK(lambda_h_c(cfg, coins, 110.0) == doctest::Approx(1.0));  // joiner young
  CHECK(lambda_h_c(cfg, coins, 130.0) == doctest::Approx(2.0));

  // c = 1: sigma = 0, instantaneous rate.
  cfg.c = 1;
  CHECK(lambda_h_c(cfg, coins, 110.0) == doctest::Approx(2.0));
}

TEST_CASE("delivery delay policies stay within the bound") {
  CHECK(adversary_delay(DelayPolicy::Zero, 3.0, 1) == 0.0);
  CHECK(adversary_delay(DelayPolicy::Max, 3.0, 1) == 3.0);
  CHECK(adversary_delay(DelayPolicy::Split, 3.0, 0) == 1.5);
  CHECK(adversary_delay(DelayPolicy::Split, 3.0, 1) == 3.0);
}

TEST_CASE("corrupt-view hook is caught as a violation") {
  SimConfig cfg;
  cfg.seed = 8;
  cfg.duration = 60.0;
  cfg.corrupt_view = true;
  const auto trace = run(cfg);
  CHECK_FALSE(trace.violations.empty());
}
