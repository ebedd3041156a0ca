// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace posat::experiments {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Worker count: POSAT_WORKERS env var, else hardware concurrency.
int worker_count();

/// Reference values reproduced by the solver (c = 1..10).
extern const double kPhiReference[10];
extern const double kToleranceReference[10];

// One function per release gate; each is self-contained and deterministic
// in `seed`.
CheckResult check_reference_constants();
CheckResult check_growth_mc(std::uint64_t seed, int trials = 200,
                            double horizon = 200.0, int beam = 20000);
CheckResult check_threshold_transition(int c, double target,
                                       std::uint64_t seed, int trials = 100);
CheckResult check_nakamoto_stability(std::uint64_t seed);
CheckResult check_attack_directions(std::uint64_t seed);
CheckResult check_vdf_contracts(std::uint64_t seed);
CheckResult check_determinism(std::uint64_t seed,
                              const std::string& golden_path = "");
CheckResult check_oracle_equivalence(std::uint64_t seed, int traces = 100);
CheckResult check_tail_bound(std::uint64_t seed);

std::vector<CheckResult> run_all(std::uint64_t seed,
                                 const std::string& golden_path = "");

// CLI recipes -----------------------------------------------------------

/// CSV "c,phi_c,tolerance_fraction" for c = 1..c_max.
std::string solve_phi_csv(int c_max);

struct SweepPoint {
  double beta = 0.0;
  double success_rate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};
struct SweepResult {
  std::vector<SweepPoint> points;
  double band_lo = 0.0;  // betas statistically compatible with 50% success
  double band_hi = 0.0;
  bool band_found = false;
  std::string csv() const;
};

SweepResult sweep_threshold(int c, double beta_lo, double beta_hi,
                            double beta_step, int trials, std::uint64_t seed,
                            double horizon = 300.0, int beam = 1500);

/// Canned attack reproduction: name in
/// {private, costless_sim, enumeration, long_range, sybil}.
CheckResult reproduce(const std::string& attack, std::uint64_t seed);

struct UnknownAttack : std::runtime_error {
  explicit UnknownAttack(const std::string& name)
      : std::runtime_error("unknown attack: " + name) {}
};

/// The deterministic config used for the golden trace.
std::string golden_config_json();

}  // namespace posat::experiments
