// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace posat::growth {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct HorizonTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Solution of the branching-random-walk rate problem for one (c, lambda_a).
/// phi_c is the amplification of the private adversary tree growth rate:
/// the tree deepens at rate phi_c * lambda_a.
struct GrowthSolution {
  int c = 1;
  double lambda_a = 1.0;
  double theta_star = 0.0;      // negative tilt optimizer
  double lambda_c_at_star = 0.0;
  double eta_c = 0.0;
  double phi_c = 0.0;           // c * eta_c
};

/// Log moment generating function of one superblock displacement:
/// log( lambda_a^c / (-theta (lambda_a - theta)^(c-1)) ), theta < 0.
double lambda_c(double theta, double lambda_a, int c);

/// Analytic derivative: -1/theta + (c-1)/(lambda_a - theta).
double lambda_c_dot(double theta, double lambda_a, int c);

/// Finds the unique negative root of Lambda_c(t) = t * Lambda_c'(t) with a
/// safeguarded bisection/Newton iteration and fills in eta_c and phi_c.
GrowthSolution solve_theta_star(int c, double lambda_a = 1.0);

/// 1 / (1 + phi_c): the adversarial stake fraction tolerated at zero delay.
double tolerance_fraction(int c);

/// sigma(c) = (c-1) * (delta + (1+kappa)/lambda_min): high-probability
/// worst-case wait of a freshly online coin for the next epoch beginning.
double sigma_c(int c, double delta, double kappa, double lambda_min);

struct McDepthStats {
  double mean_depth_rate = 0.0;  // mean of depth/horizon over trials
  double ci_halfwidth = 0.0;     // 1.96 * stderr
  std::vector<double> rates;     // per-trial depth/horizon
};

/// Direct Monte Carlo of the private adversary tree in superblock form:
/// generation-1 children at the Poisson points of rate lambda_a (the first
/// win is gifted c-1 levels), deeper generations need c wins before their
/// first child. Tracks the earliest arrival per generation with a beam of
/// the `beam_width` earliest nodes per level.
McDepthStats brw_private_tree_mc(int c, double lambda_a, double horizon,
                                 int trials, std::uint64_t seed,
                                 int beam_width = 20000, int workers = 0);

/// First-arrival times per superblock generation for one trial
/// (front[k-1] = Q*_k). `streams_per_parent` > 1 models the block
/// enumeration attack: each completed superblock offers that many
/// independent randomness continuations when time-ordering is not enforced.
std::vector<double> brw_front_times(int c, double lambda_a, double horizon,
                                    std::uint64_t seed, int beam_width,
                                    int streams_per_parent = 1);

/// Depth (in blocks) of the tree at time t given the front times of a trial.
int depth_at(const std::vector<double>& front, int c, double t);

/// Chernoff-style tail bound on P(D_i(t) >= phi_c lambda_a t + c x), with
/// the series-integral factor replaced by its limit lambda_a / (-theta*).
/// May exceed 1 for small t; returned raw.
double depth_tail_bound(int c, double lambda_a, double t, double x);

}  // namespace posat::growth
