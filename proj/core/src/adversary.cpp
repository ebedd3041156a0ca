// SPDX-License-Identifier: Apache-2.0
#include "posat/adversary.hpp"

namespace posat::adversary {

simnet::SimConfig private_attack(double lambda_h, double lambda_a,
                                 double target_depth_margin) {
  simnet::SimConfig cfg;
  cfg.adversary_strategy = "private";
  cfg.honest_schedule = simnet::RateSchedule::constant(lambda_h);
  cfg.adversary_schedule = simnet::RateSchedule::constant(lambda_a);
  cfg.strategy_params["target_depth_margin"] = target_depth_margin;
  return cfg;
}

races::RaceOutcome costless_simulation_attack(Baseline baseline,
                                              const races::CostlessParams& p,
                                              std::uint64_t seed,
                                              int beam_width) {
  return races::costless_race(baseline == Baseline::VrfLottery, p, seed,
                              beam_width);
}

std::pair<double, double> enumeration_attack(bool time_ordering_enforced,
                                             int c, double lambda_a,
                                             double horizon,
                                             std::uint64_t seed,
                                             int beam_width) {
  auto pair = races::enumeration_growth_pair(c, lambda_a, horizon, seed,
                                             beam_width);
  if (time_ordering_enforced) pair.first = pair.second;  // branches rejected
  return pair;
}

races::RaceOutcome long_range_attack(bool time_ordering_enforced, int c,
                                     double lambda_a, double lambda_h, int k,
                                     double horizon, std::uint64_t seed,
                                     int beam_width) {
  return races::long_range_race(time_ordering_enforced, c, lambda_a, lambda_h,
                                k, horizon, seed, beam_width);
}

void honest_tip_switch(node::NodeState& state, BlockHash equal_tip) {
  node::honest_tip_switch(state, equal_tip);
}

}  // namespace posat::adversary
