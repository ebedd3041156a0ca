// SPDX-License-Identifier: Apache-2.0
#include "posat/races.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "posat/growth.hpp"

namespace posat::races {

std::vector<double> honest_level_times(const simnet::RateSchedule& schedule,
                                       double delta, double horizon,
                                       Rng& rng) {
  const double env = schedule.max_rate();
  std::vector<double> arrivals;
  double t = 0.0;
  while (true) {
    t += sample_exponential(rng, env);
    if (t > horizon) break;
    if (uniform01(rng) * env <= schedule.at(t)) arrivals.push_back(t);
  }
  if (delta <= 0.0) return arrivals;
  std::vector<double> levels;
  std::size_t i = 0;
  while (i < arrivals.size()) {
    const double start = arrivals[i];
    levels.push_back(start);
    while (i < arrivals.size() && arrivals[i] <= start + delta) ++i;
  }
  return levels;
}

int honest_length(const std::vector<double>& level_times, double t) {
  return static_cast<int>(
      std::upper_bound(level_times.begin(), level_times.end(), t) -
      level_times.begin());
}

namespace {

// Shared overtaking check: adversary depth jumps to c*m at front[m-1].
RaceOutcome race_outcome(const std::vector<double>& front, int c,
                         const std::vector<double>& level_times, int k,
                         double horizon, double front_offset = 0.0) {
  RaceOutcome out;
  for (std::size_t m = 0; m < front.size(); ++m) {
    const double t = front[m] + front_offset;
    if (t > horizon) break;
    const int depth = c * static_cast<int>(m + 1);
    const int len = honest_length(level_times, t);
    if (depth > len && len > k) {
      out.success = true;
      out.time_of_success = t;
      out.reorg_depth = len - k;
      break;
    }
  }
  return out;
}

}  // namespace

RaceOutcome private_race(int c, double lambda_a, double lambda_h, double delta,
                         int k, double horizon, std::uint64_t seed,
                         int beam_width) {
  Rng hrng = make_rng(seed, rng_tag::coin_wins);
  const auto levels = honest_level_times(
      simnet::RateSchedule::constant(lambda_h), delta, horizon, hrng);
  const auto front = growth::brw_front_times(
      c, lambda_a, horizon, mix_seed(seed, rng_tag::adversary_tree),
      beam_width);
  return race_outcome(front, c, levels, k, horizon);
}

double threshold_success_rate(int c, double beta, int trials, double delta,
                              int k, double horizon, std::uint64_t seed,
                              int beam_width, int workers) {
  if (workers <= 0) {
    unsigned hc = std::thread::hardware_concurrency();
    workers = hc == 0 ? 1 : static_cast<int>(hc);
  }
  std::vector<int> wins(static_cast<std::size_t>(workers), 0);
  auto chunk = [&](int w) {
    for (int i = w; i < trials; i += workers) {
      const auto out = private_race(
          c, beta, 1.0 - beta, delta, k, horizon,
          mix_seed(seed, rng_tag::race, static_cast<std::uint64_t>(i)),
          beam_width);
      if (out.success) ++wins[static_cast<std::size_t>(w)];
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(chunk, w);
  chunk(0);
  for (auto& th : pool) th.join();
  int total = 0;
  for (int w : wins) total += w;
  return static_cast<double>(total) / static_cast<double>(trials);
}

RaceOutcome costless_race(bool vrf_baseline, const CostlessParams& p,
                          std::uint64_t seed, int beam_width) {
  simnet::RateSchedule honest;
  honest.steps = {{0.0, p.lambda_h_early}, {p.t_join, p.lambda_h_late}};
  Rng hrng = make_rng(seed, rng_tag::coin_wins);
  const auto levels = honest_level_times(honest, 0.0, p.horizon, hrng);

  if (vrf_baseline) {
    // Instant lottery: every past slot is checkable at join time, so the
    // adversary's chain from genesis materializes at t_join and then keeps
    // pace with real time.
    Rng arng = make_rng(seed, rng_tag::adversary_tree);
    std::vector<double> adv;
    double t = 0.0;
    while (true) {
      t += sample_exponential(arng, p.lambda_a);
      if (t > p.horizon) break;
      adv.push_back(std::max(t, p.t_join));  // retroactive slots land at join
    }
    return race_outcome(adv, 1, levels, p.k, p.horizon);
  }
  // Sequential protocol: the private tree can only start at t_join.
  const auto front = growth::brw_front_times(
      1, p.lambda_a, p.horizon - p.t_join,
      mix_seed(seed, rng_tag::adversary_tree), beam_width);
  return race_outcome(front, 1, levels, p.k, p.horizon, p.t_join);
}

std::pair<double, double> enumeration_growth_pair(int c, double lambda_a,
                                                  double horizon,
                                                  std::uint64_t seed,
                                                  int beam_width) {
  // Off: c randomness choices per private epoch = c child streams per
  // parent. On: honest validation forces a single stream (paired seed).
  const auto off = growth::brw_front_times(
      c, lambda_a, horizon, mix_seed(seed, rng_tag::adversary_tree),
      beam_width, c);
  const auto on = growth::brw_front_times(
      c, lambda_a, horizon, mix_seed(seed, rng_tag::adversary_tree),
      beam_width, 1);
  const double off_rate = growth::depth_at(off, c, horizon) / horizon;
  const double on_rate = growth::depth_at(on, c, horizon) / horizon;
  return {off_rate, on_rate};
}

RaceOutcome long_range_race(bool time_ordering_on, int c, double lambda_a,
                            double lambda_h, int k, double horizon,
                            std::uint64_t seed, int beam_width) {
  // A long-range attack rewrites deep history: the adversary only begins
  // its fork from genesis at attack_start, by which time the honest chain
  // already holds a lead of about lambda_h * attack_start levels.
  const double attack_start = horizon / 8.0;
  Rng hrng = make_rng(seed, rng_tag::coin_wins);
  const auto levels = honest_level_times(
      simnet::RateSchedule::constant(lambda_h), 0.0, horizon, hrng);
  if (time_ordering_on) {
    // Backdated "as if c=1" blocks are rejected on reveal (stale slots);
    // what is left is the plain private attack at the protocol's real c,
    // starting from scratch against the honest lead.
    const auto front = growth::brw_front_times(
        c, lambda_a, horizon - attack_start,
        mix_seed(seed, rng_tag::adversary_tree), beam_width);
    return race_outcome(front, c, levels, k, horizon, attack_start);
  }
  // Off: the adversary dictates every epoch's randomness and privately
  // mines with c=1 amplification, depth counted per block level.
  const auto front = growth::brw_front_times(
      1, lambda_a, horizon - attack_start,
      mix_seed(seed, rng_tag::adversary_tree), beam_width);
  return race_outcome(front, 1, levels, k, horizon, attack_start);
}

double sybil_depth_rate(int c, double lambda_a, int m_coins, double horizon,
                        std::uint64_t seed, int beam_width) {
  // Per parent, the win process is the merge of m_coins independent
  // streams of rate lambda_a / m_coins; the front logic is otherwise the
  // plain union sampler.
  Rng rng(mix_seed(seed, rng_tag::adversary_tree));
  const double coin_rate = lambda_a / m_coins;
  const std::size_t beam = static_cast<std::size_t>(beam_width);

  // Next combined win after `start` for one parent: minimum over coins of
  // that coin's next arrival, tracked with per-coin clocks.
  auto combined_wins = [&](double start, int count,
                           double limit) -> std::vector<double> {
    std::vector<double> clocks(static_cast<std::size_t>(m_coins));
    for (auto& x : clocks) x = start + sample_exponential(rng, coin_rate);
    std::vector<double> wins;
    while (static_cast<int>(wins.size()) < count) {
      auto it = std::min_element(clocks.begin(), clocks.end());
      if (*it > limit) break;
      wins.push_back(*it);
      *it += sample_exponential(rng, coin_rate);
    }
    return wins;
  };

  std::vector<double> front;
  std::vector<double> level = {0.0};
  int wins_needed = 1;  // gifted first generation
  while (true) {
    std::vector<double> next;
    for (double q : level) {
      // Activation after wins_needed combined wins, then every further
      // combined win is a child.
      const auto activation = combined_wins(q, wins_needed, horizon);
      if (static_cast<int>(activation.size()) < wins_needed) continue;
      double t = activation.back();
      next.push_back(t);
      const auto kids =
          combined_wins(t, static_cast<int>(beam), horizon);
      for (double kt : kids) next.push_back(kt);
    }
    std::sort(next.begin(), next.end());
    if (next.size() > beam) next.resize(beam);
    if (next.empty()) break;
    front.push_back(next.front());
    level = std::move(next);
    wins_needed = c;
  }
  return growth::depth_at(front, c, horizon) / horizon;
}

}  // namespace posat::races
