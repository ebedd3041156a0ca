// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "posat/rng.hpp"
#include "posat/simnet.hpp"

namespace posat::races {

/// Outcome of one adversary-vs-honest race.
struct RaceOutcome {
  bool success = false;
  double time_of_success = -1.0;
  int reorg_depth = 0;
};

/// Honest chain level completion times over [0, horizon]: Poisson proposals
/// under the schedule, then worst-case Delta leveling (all blocks within
/// Delta of a level opener share its level).
std::vector<double> honest_level_times(const simnet::RateSchedule& schedule,
                                       double delta, double horizon, Rng& rng);

/// Honest chain length at time t given level completion times.
int honest_length(const std::vector<double>& level_times, double t);

/// Private attack from genesis: the adversary's withheld tree (beam-limited
/// front) against the honest chain. Success = the private chain overtakes
/// the public one while more than k public levels exist (a confirmed block
/// is displaced).
RaceOutcome private_race(int c, double lambda_a, double lambda_h, double delta,
                         int k, double horizon, std::uint64_t seed,
                         int beam_width);

/// Success frequency of private_race over `trials` seeds with total stake
/// rate 1 split as lambda_a = beta, lambda_h = 1 - beta.
double threshold_success_rate(int c, double beta, int trials, double delta,
                              int k, double horizon, std::uint64_t seed,
                              int beam_width, int workers = 0);

struct CostlessParams {
  double lambda_h_early = 0.1;  // honest online stake before the join
  double lambda_h_late = 0.8;   // honest online stake after the join
  double lambda_a = 0.2;        // adversary stake, joins at t_join
  double t_join = 150.0;
  double horizon = 400.0;
  int k = 6;
};

/// Costless-simulation contrast. Under the instant-lottery
/// baseline the late adversary retroactively claims every past slot; under
/// the sequential protocol its chain can only start growing at t_join.
RaceOutcome costless_race(bool vrf_baseline, const CostlessParams& p,
                          std::uint64_t seed, int beam_width);

/// Paired growth rates (enforcement off, enforcement on) for the
/// enumeration strategy: with time-ordering off the adversary derives the
/// next epoch's randomness from each of its c epoch blocks.
std::pair<double, double> enumeration_growth_pair(int c, double lambda_a,
                                                  double horizon,
                                                  std::uint64_t seed,
                                                  int beam_width);

/// Long-range strategy: with time-ordering off the adversary privately
/// proceeds as if c = 1 (it dictates every epoch's randomness); with it on
/// the strategy degenerates to the plain private attack.
RaceOutcome long_range_race(bool time_ordering_on, int c, double lambda_a,
                            double lambda_h, int k, double horizon,
                            std::uint64_t seed, int beam_width);

/// Private-tree depth rate with the adversary stake split into m equal
/// coins (per-parent win process is the superposition of m streams of rate
/// lambda_a / m). Distribution must not depend on m.
double sybil_depth_rate(int c, double lambda_a, int m_coins, double horizon,
                        std::uint64_t seed, int beam_width);

}  // namespace posat::races
