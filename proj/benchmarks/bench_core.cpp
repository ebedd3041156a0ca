// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "posat/growth.hpp"
#include "posat/randvdf.hpp"
#include "posat/simnet.hpp"

namespace {

void BM_SolvePhi(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(posat::growth::solve_theta_star(c, 1.0));
}
BENCHMARK(BM_SolvePhi)->Arg(1)->Arg(10)->Arg(64);

void BM_VdfEval(benchmark::State& state) {
  const auto keys = posat::randvdf::keygen(1);
  std::uint64_t slot = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(posat::randvdf::eval(
        posat::digest_from_u64(slot), keys, 1.0, slot, 1.0 / 64.0));
    ++slot;
  }
}
BENCHMARK(BM_VdfEval);

void BM_BrwFront(benchmark::State& state) {
  const int beam = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        posat::growth::brw_front_times(1, 1.0, 50.0, ++seed, beam));
}
BENCHMARK(BM_BrwFront)->Arg(500)->Arg(4000);

void BM_SimRun(benchmark::State& state) {
  posat::simnet::SimConfig cfg;
  cfg.duration = 100.0;
  cfg.num_nodes = 2;
  cfg.delta = 0.2;
  cfg.adversary_strategy = "private";
  cfg.adversary_schedule = posat::simnet::RateSchedule::constant(0.3);
  for (auto _ : state) {
    cfg.seed++;
    benchmark::DoNotOptimize(posat::simnet::run(cfg));
  }
}
BENCHMARK(BM_SimRun);

}  // namespace

BENCHMARK_MAIN();
