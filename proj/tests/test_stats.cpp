// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <cmath>

#include "posat/rng.hpp"
#include "posat/stats.hpp"

using namespace posat;
using namespace posat::stats;

TEST_CASE("chi-square survival function anchors") {
  // Classical critical values.
  CHECK(chi_square_sf(3.841, 1) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(chi_square_sf(6.635, 1) == doctest::Approx(0.01).epsilon(1e-3));
  CHECK(chi_square_sf(18.307, 10) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(chi_square_sf(0.0, 3) == doctest::Approx(1.0));
}

TEST_CASE("incomplete beta sanity") {
  CHECK(inc_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(inc_beta(2.0, 2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(inc_beta(2.0, 5.0, 0.2) + 0.0 ==
        doctest::Approx(1.0 - inc_beta(5.0, 2.0, 0.8)).epsilon(1e-10));
}

TEST_CASE("geometric goodness of fit accepts the truth, rejects a lie") {
  Rng rng = make_rng(3, rng_tag::race);
  std::vector<std::uint64_t> samples;
  const double p = 0.1;
  for (int i = 0; i < 3000; ++i) {
    std::uint64_t k = 1;
    while (uniform01(rng) > p) ++k;
    samples.push_back(k);
  }
  CHECK(chi_square_geometric_gof(samples, 0.1, 0.01).pass);
  CHECK_FALSE(chi_square_geometric_gof(samples, 0.2, 0.01).pass);
}

TEST_CASE("two-sample KS: same vs shifted") {
  Rng rng = make_rng(9, rng_tag::race);
  std::vector<double> a, b, shifted;
  for (int i = 0; i < 1500; ++i) {
    a.push_back(sample_exponential(rng, 1.0));
    b.push_back(sample_exponential(rng, 1.0));
    shifted.push_back(sample_exponential(rng, 1.0) + 0.4);
  }
  CHECK(ks_two_sample(a, b, 0.01).same);
  CHECK_FALSE(ks_two_sample(a, shifted, 0.01).same);
}

TEST_CASE("Wilson interval brackets the estimate and stays in [0,1]") {
  const auto ci = binomial_ci(50, 100);
  CHECK(ci.lo > 0.40);
  CHECK(ci.hi < 0.60);
  CHECK(ci.lo < 0.5);
  CHECK(ci.hi > 0.5);
  const auto edge = binomial_ci(0, 20);
  CHECK(edge.lo == 0.0);
  CHECK(edge.hi > 0.0);
}

TEST_CASE("paired one-sided t-test direction") {
  std::vector<double> base(40), better(40), same(40);
  Rng rng = make_rng(17, rng_tag::race);
  for (int i = 0; i < 40; ++i) {
    base[i] = uniform01(rng);
    better[i] = base[i] + 0.2 + 0.05 * uniform01(rng);
    same[i] = base[i] + 0.001 * (uniform01(rng) - 0.5);
  }
  CHECK(paired_t_greater(better, base, 0.05).greater);
  CHECK_FALSE(paired_t_greater(base, better, 0.05).greater);
  CHECK_FALSE(paired_t_greater(same, base, 0.05).greater);
}
