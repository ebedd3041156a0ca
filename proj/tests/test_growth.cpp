// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <cmath>

#include "posat/growth.hpp"

using namespace posat;
using namespace posat::growth;

TEST_CASE("log moment generating function: closed-form anchor points") {
  const double e = std::exp(1.0);
  CHECK(lambda_c(-e, 1.0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(lambda_c(-1.0, 1.0, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(lambda_c(0.5, 1.0, 1), DomainError);

  // Independent long-double oracle for c = 2.
  for (double theta : {-0.25, -1.0, -3.5, -10.0}) {
    const long double la = 1.0L;
    const long double oracle =
        std::log(la * la / ((-static_cast<long double>(theta)) *
                            (la - static_cast<long double>(theta))));
    CHECK(lambda_c(theta, 1.0, 2) ==
          doctest::Approx(static_cast<double>(oracle)).epsilon(1e-12));
  }
}

TEST_CASE("analytic derivative matches finite differences") {
  for (int c : {1, 2, 5}) {
    for (double theta : {-0.3, -2.0, -7.0}) {
      const double h = 1e-6;
      const double fd =
          (lambda_c(theta + h, 1.3, c) - lambda_c(theta - h, 1.3, c)) /
          (2.0 * h);
      CHECK(lambda_c_dot(theta, 1.3, c) ==
            doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("solver: c=1 root is -e*lambda_a, residuals tiny up to c=64") {
  const auto s1 = solve_theta_star(1, 1.0);
  CHECK(s1.theta_star == doctest::Approx(-std::exp(1.0)).epsilon(1e-10));
  CHECK(s1.phi_c == doctest::Approx(std::exp(1.0)).epsilon(1e-10));

  double prev = 1e9;
  for (int c = 1; c <= 64; ++c) {
    const auto s = solve_theta_star(c, 1.0);
    const double residual = std::abs(
        lambda_c(s.theta_star, 1.0, c) -
        s.theta_star * lambda_c_dot(s.theta_star, 1.0, c));
    CHECK(residual < 1e-10);
    CHECK(s.phi_c < prev);  // strictly decreasing toward 1
    CHECK(s.phi_c > 1.0);
    prev = s.phi_c;
  }
}

TEST_CASE("scale invariance in lambda_a") {
  for (int c : {1, 3, 10}) {
    const double base = solve_theta_star(c, 1.0).phi_c;
    for (double la : {0.5, 2.0}) {
      const auto s = solve_theta_star(c, la);
      CHECK(std::abs(s.phi_c - base) < 1e-9 * base);
      CHECK(s.theta_star ==
            doctest::Approx(la * solve_theta_star(c, 1.0).theta_star)
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("tolerance fraction anchors") {
  CHECK(tolerance_fraction(1) ==
        doctest::Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-10));
  CHECK(tolerance_fraction(5) == doctest::Approx(0.35772).epsilon(1e-4));
  CHECK(tolerance_fraction(10) == doctest::Approx(0.38780).epsilon(1e-4));
}

TEST_CASE("waiting-delay horizon sigma(c)") {
  CHECK(sigma_c(1, 3.0, 9.0, 1.0) == 0.0);
  CHECK(sigma_c(3, 1.0, 9.0, 1.0) == doctest::Approx(22.0));
  CHECK(sigma_c(5, 1.0, 9.0, 1.0) ==
        doctest::Approx(2.0 * sigma_c(3, 1.0, 9.0, 1.0)));
  CHECK_THROWS_AS(sigma_c(1, -1.0, 9.0, 1.0), DomainError);
}

TEST_CASE("front sampler edge cases") {
  // Effectively zero rate: no level-1 arrival inside the horizon.
  const auto front = brw_front_times(1, 1e-9, 1.0, 1, 100);
  CHECK(front.empty());
  CHECK(depth_at(front, 1, 1.0) == 0);
  CHECK_THROWS_AS(brw_private_tree_mc(1, 1e-9, 1.0, 8, 1, 100, 2),
                  HorizonTooSmall);
}

TEST_CASE("short-horizon Monte Carlo brackets the asymptotic rate") {
  // Quick version of the release-gate check: generous tolerance.
  const auto mc = brw_private_tree_mc(1, 1.0, 60.0, 40, 7, 4000, 0);
  CHECK(mc.mean_depth_rate > 2.2);
  CHECK(mc.mean_depth_rate < 3.1);
}

TEST_CASE("tail bound is monotone decreasing in x") {
  double prev = 1e300;
  for (double x = 1.0; x <= 6.0; x += 1.0) {
    const double b = depth_tail_bound(2, 1.0, 10.0, x);
    CHECK(b < prev);
    prev = b;
  }
}
