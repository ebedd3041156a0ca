// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "posat/races.hpp"
#include "posat/simnet.hpp"

namespace posat::adversary {

/// Strategy factories: each returns a SimConfig preset wired for the
/// corresponding attack; callers then set seeds/rates as needed. The fast
/// race-based Monte Carlos live in posat::races; the full event-loop
/// realization of the private strategy lives in simnet::run.

/// Withhold-and-overtake on every eligible private block (nothing at
/// stake). target_depth_margin widens the reveal trigger beyond a bare
/// overtake.
simnet::SimConfig private_attack(double lambda_h, double lambda_a,
                                 double target_depth_margin = 0.0);

struct BaselineRequired : std::runtime_error {
  BaselineRequired()
      : std::runtime_error("costless simulation needs a baseline selection") {}
};

/// Baselines for the costless-simulation contrast.
enum class Baseline { Posat, VrfLottery };

races::RaceOutcome costless_simulation_attack(Baseline baseline,
                                              const races::CostlessParams& p,
                                              std::uint64_t seed,
                                              int beam_width = 1500);

/// Enumerating the c randomness choices of a private epoch only pays when
/// honest validation does not enforce slot ordering. Returns (off, on)
/// growth rates from one paired seed.
std::pair<double, double> enumeration_attack(bool time_ordering_enforced,
                                             int c, double lambda_a,
                                             double horizon,
                                             std::uint64_t seed,
                                             int beam_width = 1500);

races::RaceOutcome long_range_attack(bool time_ordering_enforced, int c,
                                     double lambda_a, double lambda_h, int k,
                                     double horizon, std::uint64_t seed,
                                     int beam_width = 1500);

/// A4 directive: delegate to the node-level override.
void honest_tip_switch(node::NodeState& state, BlockHash equal_tip);

}  // namespace posat::adversary
