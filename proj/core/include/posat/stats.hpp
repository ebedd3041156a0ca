// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace posat::stats {

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);
/// Regularized incomplete beta I_x(a, b).
double inc_beta(double a, double b, double x);

/// Upper-tail p-value of a chi-square statistic with df degrees of freedom.
double chi_square_sf(double stat, int df);

struct GofResult {
  double stat = 0.0;
  int df = 0;
  double p_value = 1.0;
  bool pass = false;  // p_value >= alpha
};

/// Pearson chi-square test of geometric(p) fit (support {1,2,...}), pooling
/// the tail so every expected cell count is >= 5.
GofResult chi_square_geometric_gof(const std::vector<std::uint64_t>& samples,
                                   double p, double alpha);

struct KsResult {
  double stat = 0.0;       // sup |F_n - G_m|
  double critical = 0.0;   // c(alpha) * sqrt((n+m)/(n*m))
  bool same = false;       // stat <= critical: no significant difference
};

/// Two-sample Kolmogorov-Smirnov test at level alpha (asymptotic critical
/// value c(alpha) = sqrt(-ln(alpha/2)/2)).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b,
                       double alpha);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for a binomial proportion.
Interval binomial_ci(int successes, int trials, double z = 1.96);

struct TTestResult {
  double t = 0.0;
  int df = 0;
  double p_value = 1.0;   // one-sided, H1: mean(a - b) > 0
  bool greater = false;   // p_value < alpha
};

/// Paired one-sided t-test of H1: mean(a) > mean(b).
TTestResult paired_t_greater(const std::vector<double>& a,
                             const std::vector<double>& b, double alpha);

double mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);

}  // namespace posat::stats
