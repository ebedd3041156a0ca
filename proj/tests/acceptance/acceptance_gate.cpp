// SPDX-License-Identifier: Apache-2.0
// Release gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "posat/experiments.hpp"

using posat::experiments::CheckResult;

namespace {

bool report(const CheckResult& r, double seconds) {
  std::printf("%s  %-32s (%.1fs)  %s\n", r.pass ? "PASS" : "FAIL",
              r.name.c_str(), seconds, r.detail.c_str());
  std::fflush(stdout);
  return r.pass;
}

template <typename F>
bool timed(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  const CheckResult r = fn();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report(r, secs);
}

}  // namespace

int main() {
  namespace ex = posat::experiments;
  const std::uint64_t seed = 20260823;
  bool ok = true;

  // 1. Solver regression against the reference constants (< 1 s).
  {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = ex::check_reference_constants();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (secs >= 1.0) {
      r.pass = false;
      r.detail += " [exceeded 1s budget]";
    }
    ok &= report(r, secs);
  }
  // 2. Monte Carlo growth-rate cross-validation (< 2 min).
  ok &= timed([&] { return ex::check_growth_mc(seed); });
  // 3. Threshold transition bands (< 15 min combined).
  ok &= timed([&] {
    return ex::check_threshold_transition(1, 1.0 / (1.0 + std::exp(1.0)),
                                          seed);
  });
  ok &= timed([&] { return ex::check_threshold_transition(5, 0.358, seed); });
  // 4. Nakamoto stability across all generated traces.
  ok &= timed([&] { return ex::check_nakamoto_stability(seed); });
  // 5. Attack-direction suite.
  ok &= timed([&] { return ex::check_attack_directions(seed); });
  // 6. Primitive contracts.
  ok &= timed([&] { return ex::check_vdf_contracts(seed); });
  // 7. Determinism + golden trace.
  ok &= timed([&] { return ex::check_determinism(seed, POSAT_GOLDEN_TRACE); });
  // 8. Incremental vs brute-force detector.
  ok &= timed([&] { return ex::check_oracle_equivalence(seed); });
  // 9. Tail-bound sanity.
  ok &= timed([&] { return ex::check_tail_bound(seed); });

  return ok ? 0 : 1;
}
