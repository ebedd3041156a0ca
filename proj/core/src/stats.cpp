// SPDX-License-Identifier: Apache-2.0
#include "posat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace posat::stats {

namespace {

// Series expansion of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), valid for x >= a + 1 (modified Lentz).
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  const double tiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-14) break;
  }
  return h;
}

}  // namespace

double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p domain");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double inc_beta(double a, double b, double x) {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("inc_beta domain");
  if (x == 0.0 || x == 1.0) return x;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double chi_square_sf(double stat, int df) {
  if (df < 1) throw std::invalid_argument("df must be >= 1");
  if (stat <= 0.0) return 1.0;
  return 1.0 - gamma_p(0.5 * df, 0.5 * stat);
}

GofResult chi_square_geometric_gof(const std::vector<std::uint64_t>& samples,
                                   double p, double alpha) {
  if (samples.empty() || p <= 0.0 || p >= 1.0)
    throw std::invalid_argument("chi_square_geometric_gof inputs");
  const double n = static_cast<double>(samples.size());

  // Cells are k = 1, 2, ... with tail pooling so expected counts stay >= 5.
  std::vector<double> expected;
  std::vector<std::uint64_t> upper;  // cell covers (prev_upper, upper]
  double remaining = 1.0;
  std::uint64_t k = 1;
  while (remaining * n >= 10.0) {
    const double cell = p * std::pow(1.0 - p, static_cast<double>(k - 1));
    if ((remaining - cell) * n < 5.0) break;
    expected.push_back(cell * n);
    upper.push_back(k);
    remaining -= cell;
    ++k;
  }
  expected.push_back(remaining * n);
  upper.push_back(~0ULL);

  std::vector<double> observed(expected.size(), 0.0);
  for (std::uint64_t s : samples) {
    std::size_t cell = 0;
    while (s > upper[cell]) ++cell;
    observed[cell] += 1.0;
  }

  GofResult r;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double d = observed[i] - expected[i];
    r.stat += d * d / expected[i];
  }
  r.df = static_cast<int>(expected.size()) - 1;
  if (r.df < 1) r.df = 1;
  r.p_value = chi_square_sf(r.stat, r.df);
  r.pass = r.p_value >= alpha;
  return r;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b,
                       double alpha) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / n - j / m));
  }
  KsResult r;
  r.stat = d;
  const double c_alpha = std::sqrt(-0.5 * std::log(alpha / 2.0));
  r.critical = c_alpha * std::sqrt((n + m) / (n * m));
  r.same = r.stat <= r.critical;
  return r;
}

Interval binomial_ci(int successes, int trials, double z) {
  if (trials <= 0) throw std::invalid_argument("binomial_ci: trials");
  const double n = trials;
  const double phat = successes / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

TTestResult paired_t_greater(const std::vector<double>& a,
                             const std::vector<double>& b, double alpha) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("paired_t_greater: need matched samples");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const double m = mean(d);
  const double v = sample_variance(d);
  TTestResult r;
  r.df = static_cast<int>(a.size()) - 1;
  if (v == 0.0) {
    r.t = m > 0.0 ? 1e9 : (m < 0.0 ? -1e9 : 0.0);
    r.p_value = m > 0.0 ? 0.0 : 1.0;
  } else {
    r.t = m / std::sqrt(v / static_cast<double>(a.size()));
    // One-sided p from the Student-t survival function via inc_beta.
    const double x = r.df / (r.df + r.t * r.t);
    const double two_sided = inc_beta(0.5 * r.df, 0.5, x);
    r.p_value = r.t > 0.0 ? 0.5 * two_sided : 1.0 - 0.5 * two_sided;
  }
  r.greater = r.p_value < alpha;
  return r;
}

double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

}  // namespace posat::stats
