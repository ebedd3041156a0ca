// SPDX-License-Identifier: Apache-2.0
#include "posat/growth.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "posat/rng.hpp"

namespace posat::growth {

double lambda_c(double theta, double lambda_a, int c) {
  if (theta >= 0.0) throw DomainError("lambda_c requires theta < 0");
  if (lambda_a <= 0.0 || c < 1) throw DomainError("bad lambda_a or c");
  return c * std::log(lambda_a) - std::log(-theta) -
         (c - 1) * std::log(lambda_a - theta);
}

double lambda_c_dot(double theta, double lambda_a, int c) {
  if (theta >= 0.0) throw DomainError("lambda_c_dot requires theta < 0");
  return -1.0 / theta + (c - 1) / (lambda_a - theta);
}

namespace {
// Root function g(theta) = Lambda_c - theta * Lambda_c'.
double g_fn(double theta, double lambda_a, int c) {
  return lambda_c(theta, lambda_a, c) - theta * lambda_c_dot(theta, lambda_a, c);
}
}  // namespace

GrowthSolution solve_theta_star(int c, double lambda_a) {
  if (c < 1 || lambda_a <= 0.0)
    throw DomainError("solve_theta_star: need c >= 1, lambda_a > 0");

  // g -> +inf as theta -> 0- and -inf as theta -> -inf; bracket the sign
  // change by geometric growth of the left endpoint.
  double hi = -1e-12 * lambda_a;
  double lo = -4.0 * lambda_a * c;
  int doublings = 0;
  while (g_fn(lo, lambda_a, c) > 0.0) {
    lo *= 2.0;
    if (++doublings > 200)
      throw ConvergenceFailure("no sign change while growing bracket");
  }

  double theta = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double g = g_fn(theta, lambda_a, c);
    if (g > 0.0)
      hi = theta;
    else
      lo = theta;
    // Newton step on g; g'(t) = -t * Lambda''(t), with
    // Lambda''(t) = 1/t^2 + (c-1)/(lambda_a - t)^2.
    const double d2 = 1.0 / (theta * theta) +
                      (c - 1) / ((lambda_a - theta) * (lambda_a - theta));
    const double gprime = -theta * d2;
    double next = theta - g / gprime;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - theta) < 1e-15 * std::abs(theta) && std::abs(g) < 1e-12)
      break;
    theta = next;
  }

  GrowthSolution s;
  s.c = c;
  s.lambda_a = lambda_a;
  s.theta_star = theta;
  s.lambda_c_at_star = lambda_c(theta, lambda_a, c);
  const double residual = std::abs(g_fn(theta, lambda_a, c));
  if (residual > 1e-10)
    throw ConvergenceFailure("residual " + std::to_string(residual));
  s.eta_c = theta / (lambda_a * s.lambda_c_at_star);
  s.phi_c = c * s.eta_c;

  // Sanity: theta* attains sup over theta < 0 of Lambda_c(theta)/theta.
  const double at_star = s.lambda_c_at_star / theta;
  for (int i = 1; i <= 200; ++i) {
    const double probe = -std::exp(-12.0 + 24.0 * i / 200.0) * lambda_a;
    const double v = lambda_c(probe, lambda_a, c) / probe;
    if (v > at_star + 1e-9)
      throw ConvergenceFailure("sup characterization violated on probe grid");
  }
  return s;
}

double tolerance_fraction(int c) {
  return 1.0 / (1.0 + solve_theta_star(c, 1.0).phi_c);
}

double sigma_c(int c, double delta, double kappa, double lambda_min) {
  if (c < 1 || delta < 0.0 || kappa <= 0.0 || lambda_min <= 0.0)
    throw DomainError("sigma_c: invalid parameters");
  return (c - 1) * (delta + (1.0 + kappa) / lambda_min);
}

std::vector<double> brw_front_times(int c, double lambda_a, double horizon,
                                    std::uint64_t seed, int beam_width,
                                    int streams_per_parent) {
  Rng rng(seed);
  const std::size_t beam = static_cast<std::size_t>(beam_width);

  std::vector<double> front;              // Q*_k per generation
  std::vector<double> level = {0.0};      // arrival times, sorted
  // Generation 1 is gifted c-1 levels: the root's child stream starts at
  // its first win. Deeper generations wait for c wins.
  int wins_to_first_child = 1;

  while (true) {
    // Activation = first child of each (parent, stream); afterwards the
    // stream contributes rate lambda_a to the superposed arrival process.
    std::vector<double> activations;
    activations.reserve(level.size() * static_cast<std::size_t>(streams_per_parent));
    for (double q : level)
      for (int s = 0; s < streams_per_parent; ++s) {
        const double a = q + sample_erlang(rng, wins_to_first_child, lambda_a);
        if (a <= horizon) activations.push_back(a);
      }
    std::sort(activations.begin(), activations.end());

    std::vector<double> next;
    next.reserve(beam);
    std::size_t ai = 0;
    double t = activations.empty() ? horizon : activations.front();
    std::size_t active = 0;
    while (next.size() < beam) {
      const double next_act =
          ai < activations.size() ? activations[ai] : horizon + 1.0;
      if (active == 0) {
        if (next_act > horizon) break;
        t = next_act;
        ++ai;
        ++active;
        next.push_back(t);  // the activation is itself an arrival
        continue;
      }
      const double dt = sample_exponential(rng, lambda_a * active);
      if (t + dt >= next_act) {
        if (next_act > horizon) break;
        t = next_act;
        ++ai;
        ++active;
        next.push_back(t);
        continue;
      }
      t += dt;
      if (t > horizon) break;
      next.push_back(t);
    }
    if (next.empty()) break;
    front.push_back(next.front());
    level = std::move(next);
    wins_to_first_child = c;
  }
  return front;
}

int depth_at(const std::vector<double>& front, int c, double t) {
  // front is nondecreasing; depth = c * (#generations arrived by t).
  const auto it = std::upper_bound(front.begin(), front.end(), t);
  return c * static_cast<int>(it - front.begin());
}

McDepthStats brw_private_tree_mc(int c, double lambda_a, double horizon,
                                 int trials, std::uint64_t seed,
                                 int beam_width, int workers) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (workers <= 0) {
    unsigned hc = std::thread::hardware_concurrency();
    workers = hc == 0 ? 1 : static_cast<int>(hc);
  }
  std::vector<double> rates(static_cast<std::size_t>(trials));
  std::vector<int> no_first_level(static_cast<std::size_t>(workers), 0);

  auto run_chunk = [&](int w) {
    for (int i = w; i < trials; i += workers) {
      auto front = brw_front_times(c, lambda_a, horizon,
                                   mix_seed(seed, rng_tag::brw_trial,
                                            static_cast<std::uint64_t>(i)),
                                   beam_width);
      if (front.empty()) ++no_first_level[static_cast<std::size_t>(w)];
      rates[static_cast<std::size_t>(i)] =
          depth_at(front, c, horizon) / horizon;
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(run_chunk, w);
  run_chunk(0);
  for (auto& th : pool) th.join();

  int misses = 0;
  for (int m : no_first_level) misses += m;
  if (2 * misses > trials)
    throw HorizonTooSmall("no level-1 block in most trials");

  McDepthStats out;
  out.rates = rates;
  double mean = 0.0;
  for (double r : rates) mean += r;
  mean /= trials;
  double var = 0.0;
  for (double r : rates) var += (r - mean) * (r - mean);
  var = trials > 1 ? var / (trials - 1) : 0.0;
  out.mean_depth_rate = mean;
  out.ci_halfwidth = 1.96 * std::sqrt(var / trials);
  return out;
}

double depth_tail_bound(int c, double lambda_a, double t, double x) {
  const GrowthSolution s = solve_theta_star(c, lambda_a);
  // m must be integral; rounding up is the conservative direction.
  const double m = std::ceil(s.eta_c * lambda_a * t + x);
  const double g_cap = lambda_a / (-s.theta_star);
  const double log_bound =
      -s.theta_star * t + (m - 1.0) * s.lambda_c_at_star + std::log(g_cap);
  return std::exp(log_bound);
}

}  // namespace posat::growth
