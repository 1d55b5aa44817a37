#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "latepower/dist.hpp"
#include "oracles.hpp"

using latepower::ErrorSpec;
using latepower::multiplier;
using latepower::phi_cdf;
using latepower::phi_inv;

TEST_CASE("phi_cdf matches the series/continued-fraction oracle") {
  CHECK(phi_cdf(0.0) == 0.5);
  // Frozen with the oracle before the implementation existed.
  CHECK(phi_cdf(1.959963985) == doctest::Approx(0.9750000000268816).epsilon(1e-13));
  CHECK(phi_cdf(-8.0) == doctest::Approx(6.220960574271784e-16).epsilon(1e-10));
  CHECK(phi_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-13));

  for (double x = -8.0; x <= 8.0; x += 0.05) {
    CHECK(std::fabs(phi_cdf(x) - oracle::phi(x)) <= 1e-12);
  }
}

TEST_CASE("phi_cdf symmetry and monotonicity") {
  for (double x = 0.0; x <= 8.0; x += 0.01) {
    CHECK(std::fabs(phi_cdf(-x) - (1.0 - phi_cdf(x))) <= 1e-15);
  }
  // Strictly increasing; above ~6.5 the value sits within an ulp of 1, so
  // strictness is checked on the lower tail via symmetry.
  double prev = phi_cdf(-8.0);
  for (double x = -7.99; x <= 6.5; x += 0.01) {
    const double cur = phi_cdf(x);
    CHECK(cur > prev);
    prev = cur;
  }
  double prev_tail = phi_cdf(-6.5);
  for (double x = -6.51; x >= -8.0; x -= 0.01) {
    const double cur = phi_cdf(x);
    CHECK(cur < prev_tail);
    prev_tail = cur;
  }
}

TEST_CASE("phi_cdf rejects non-finite input") {
  CHECK_THROWS_AS(phi_cdf(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(phi_cdf(HUGE_VAL), std::domain_error);
}

TEST_CASE("phi_inv fixed points and oracle agreement") {
  CHECK(phi_inv(0.5) == 0.0);
  CHECK(phi_inv(0.975) == doctest::Approx(1.9599639845400542).epsilon(1e-12));
  CHECK(phi_inv(0.8) == doctest::Approx(0.8416212335729142).epsilon(1e-12));

  for (double p : {1e-9, 1e-6, 0.001, 0.025, 0.2, 0.5, 0.8, 0.975, 0.999, 1.0 - 1e-9}) {
    CHECK(std::fabs(phi_cdf(phi_inv(p)) - p) <= 1e-10);
  }
}

TEST_CASE("phi_inv domain errors") {
  CHECK_THROWS_AS(phi_inv(0.0), std::domain_error);
  CHECK_THROWS_AS(phi_inv(1.0), std::domain_error);
  CHECK_THROWS_AS(phi_inv(-0.1), std::domain_error);
  CHECK_THROWS_AS(phi_inv(std::nan("")), std::domain_error);
}

TEST_CASE("quantile/cdf round trip on a dense grid") {
  for (double x = -6.0; x <= 6.0; x += 0.01) {
    CHECK(std::fabs(phi_inv(phi_cdf(x)) - x) <= 1e-8);
  }
}

TEST_CASE("multiplier values") {
  CHECK(multiplier({0.05, 0.2}) == doctest::Approx(2.8015852181129684).epsilon(1e-12));
  // beta = 0.5 kills the second quantile term.
  CHECK(multiplier({0.05, 0.5}) == doctest::Approx(1.9599639845400542).epsilon(1e-12));
  CHECK(multiplier({0.01, 0.1}) == doctest::Approx(3.8573808690935012).epsilon(1e-12));
}

TEST_CASE("multiplier is strictly decreasing in alpha and beta") {
  for (double beta : {0.05, 0.2, 0.4}) {
    double prev = multiplier({0.005, beta});
    for (double alpha = 0.01; alpha <= 0.2; alpha += 0.005) {
      const double cur = multiplier({alpha, beta});
      CHECK(cur < prev);
      prev = cur;
    }
  }
  for (double alpha : {0.01, 0.05, 0.1}) {
    double prev = multiplier({alpha, 0.02});
    for (double beta = 0.05; beta <= 0.45; beta += 0.025) {
      const double cur = multiplier({alpha, beta});
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("multiplier propagates quantile domain errors") {
  CHECK_THROWS_AS(multiplier({0.0, 0.2}), std::domain_error);
  CHECK_THROWS_AS(multiplier({0.05, 1.0}), std::domain_error);
}
