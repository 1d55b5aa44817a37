#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "latepower/power.hpp"
#include "oracles.hpp"

using namespace latepower;

namespace {

const AssumptionSet kEqual{AssignmentMode::kEqual, false};
const AssumptionSet kEqualOrdered{AssignmentMode::kEqual, true};
const AssumptionSet kGeneral{AssignmentMode::kGeneral, false};
const ErrorSpec kErr{0.05, 0.2};

double neglected_term(const ErrorSpec& err) {
  // The solvers drop Phi(-c* - M); round trips are off by exactly that much.
  return oracle::phi(-oracle::phi_inv(1 - err.alpha / 2) -
                     (oracle::phi_inv(1 - err.alpha / 2) + oracle::phi_inv(1 - err.beta)));
}

}  // namespace

TEST_CASE("power_from_ncp frozen values") {
  CHECK(power_from_ncp(0.0, 0.05) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(power_from_ncp(1.959964, 0.05) ==
        doctest::Approx(0.5000442938839457).epsilon(1e-12));
  CHECK(power_from_ncp(2.801586, 0.05) ==
        doctest::Approx(0.8000011794570271).epsilon(1e-12));
  CHECK(power_from_ncp(HUGE_VAL, 0.05) == 1.0);
}

TEST_CASE("power_from_ncp is strictly increasing and floored at alpha") {
  double prev = power_from_ncp(0.0, 0.05);
  CHECK(prev == doctest::Approx(0.05).epsilon(1e-12));
  for (double ncp = 0.1; ncp <= 6.0; ncp += 0.1) {
    const double cur = power_from_ncp(ncp, 0.05);
    CHECK(cur > prev);
    CHECK(cur < 1.0);
    prev = cur;
  }
}

TEST_CASE("power_from_ncp domain errors") {
  CHECK_THROWS_AS(power_from_ncp(-0.1, 0.05), std::domain_error);
  CHECK_THROWS_AS(power_from_ncp(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(power_from_ncp(1.0, 1.0), std::domain_error);
}

TEST_CASE("ncp bounds collapse at full compliance") {
  const NcpBounds b = ncp_bounds({0.2, 1.0, 800.0, 0.5}, kEqual);
  CHECK(b.lower == doctest::Approx(2.8284271247461901).epsilon(1e-14));
  CHECK(b.upper == b.lower);
  CHECK(b.ordered == b.lower);
}

TEST_CASE("ncp bounds frozen example") {
  // kappa = 5/sqrt(70), pi = 0.2, N = 2500, equal assignment.
  const double kappa = 0.5976143046671968;
  const NcpBounds b = ncp_bounds({kappa, 0.2, 2500.0, 0.5}, kEqual);
  CHECK(b.lower == doctest::Approx(2.3113712978740537).epsilon(1e-12));
  CHECK(b.ordered == doctest::Approx(2.8676966733820221).epsilon(1e-12));
  CHECK(b.upper == doctest::Approx(4.2250351594234116).epsilon(1e-12));
}

TEST_CASE("general-mode upper bound degenerates at kappa = 2") {
  const NcpBounds b = ncp_bounds({2.0, 0.5, 1000.0, 0.3}, kGeneral);
  CHECK(std::isinf(b.upper));
  CHECK(std::isfinite(b.lower));
}

TEST_CASE("equal mode rejects p_z away from one half") {
  CHECK_THROWS_AS(ncp_bounds({0.2, 0.5, 1000.0, 0.3}, kEqual), std::domain_error);
  CHECK_THROWS_AS(ncp_bounds({0.2, 1.5, 1000.0, 0.5}, kEqual), std::domain_error);
}

TEST_CASE("late_power_bounds at zero effect returns alpha everywhere") {
  const PowerBounds b = late_power_bounds({0.0, 0.3, 1200.0, 0.5}, kEqualOrdered, kErr);
  CHECK(b.lower == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(b.upper == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(*b.ordered_lower == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("late_power_bounds nests the full-compliance analysis") {
  const PowerBounds b = late_power_bounds({0.2, 1.0, 784.0, 0.5}, kEqual, kErr);
  CHECK(b.lower == doctest::Approx(0.7995568714356514).epsilon(1e-12));
  CHECK(b.upper == b.lower);
}

TEST_CASE("containment ordering lower <= ordered <= upper") {
  for (double kappa : {0.05, 0.2, 0.5, 1.0}) {
    for (double pi : {0.1, 0.4, 0.8, 1.0}) {
      for (double n : {200.0, 1500.0, 10000.0}) {
        const PowerBounds b = late_power_bounds({kappa, pi, n, 0.5}, kEqualOrdered, kErr);
        CHECK(b.lower <= *b.ordered_lower + 1e-15);
        CHECK(*b.ordered_lower <= b.upper + 1e-15);
        const AssumptionSet gen{AssignmentMode::kGeneral, true};
        for (double pz : {0.25, 0.5, 0.67}) {
          const PowerBounds g = late_power_bounds({kappa, pi, n, pz}, gen, kErr);
          CHECK(g.lower <= *g.ordered_lower + 1e-15);
          CHECK(*g.ordered_lower <= g.upper + 1e-15);
        }
      }
    }
  }
}

TEST_CASE("bounds are strictly increasing in kappa, n and pi") {
  auto powers = [](const DesignPoint& d) {
    return late_power_bounds(d, kEqualOrdered, kErr);
  };
  for (double kappa = 0.1; kappa < 1.0; kappa += 0.1) {
    const PowerBounds a = powers({kappa, 0.4, 800.0, 0.5});
    const PowerBounds b = powers({kappa + 0.05, 0.4, 800.0, 0.5});
    if (b.upper < 1.0 - 1e-12) {
      CHECK(b.lower > a.lower);
      CHECK(*b.ordered_lower > *a.ordered_lower);
      CHECK(b.upper > a.upper);
    }
  }
  for (double n = 200.0; n < 4000.0; n += 200.0) {
    const PowerBounds a = powers({0.3, 0.4, n, 0.5});
    const PowerBounds b = powers({0.3, 0.4, n + 100.0, 0.5});
    if (b.upper < 1.0 - 1e-12) {
      CHECK(b.lower > a.lower);
      CHECK(b.upper > a.upper);
    }
  }
  for (double pi = 0.1; pi < 1.0; pi += 0.1) {
    const PowerBounds a = powers({0.3, pi, 800.0, 0.5});
    const PowerBounds b = powers({0.3, pi + 0.05, 800.0, 0.5});
    if (b.upper < 1.0 - 1e-12) {
      CHECK(b.lower > a.lower);
      CHECK(b.upper > a.upper);
    }
  }
}

TEST_CASE("mdes reduces to 2M/sqrt(N) at full compliance") {
  const MdesResult r = mdes(1.0, 784.0, 0.5, kEqual, kErr);
  CHECK(r.kappa_low == doctest::Approx(0.2001132298652120).epsilon(1e-12));
  CHECK(r.kappa_high == doctest::Approx(r.kappa_low).epsilon(1e-14));
  CHECK(r.kappa_star == doctest::Approx(r.kappa_low).epsilon(1e-14));
}

TEST_CASE("mdes reports unattainable bounds as infinity") {
  // pi sqrt(N) below 2M sqrt(v): the conservative MDES does not exist.
  const MdesResult r = mdes(0.3, 20.0, 0.5, kEqual, kErr);
  CHECK(std::isinf(r.kappa_high));
  CHECK(std::isinf(r.kappa_star));
  CHECK(std::isfinite(r.kappa_low));
}

TEST_CASE("mdes round trip against the benchmark sample sizes") {
  const MdesResult high = mdes(0.63, 9861.0, 0.67, kGeneral, kErr);
  CHECK(high.kappa_high == doctest::Approx(0.0999994526847).epsilon(1e-9));
  const MdesResult star = mdes(0.63, 8966.0, 0.67, kGeneral, kErr);
  CHECK(star.kappa_star == doctest::Approx(0.100002710015).epsilon(1e-9));
}

TEST_CASE("mdes requires beta below one half") {
  CHECK_THROWS_AS(mdes(0.5, 1000.0, 0.5, kEqual, {0.05, 0.6}), std::domain_error);
}

TEST_CASE("required_n frozen values") {
  const SampleSizeResult ate = required_n(0.2, 1.0, 0.5, kEqual, kErr);
  CHECK(ate.n_low == doctest::Approx(784.8879734349089).epsilon(1e-12));
  CHECK(ate.n_high == doctest::Approx(ate.n_low).epsilon(1e-14));
  CHECK(ate.n_star == doctest::Approx(ate.n_low).epsilon(1e-14));

  const SampleSizeResult t1 = required_n(0.10, 0.63, 0.67, kGeneral, kErr);
  CHECK(t1.n_high == doctest::Approx(9860.89719879).epsilon(1e-9));
  CHECK(t1.n_star == doctest::Approx(8966.48475446).epsilon(1e-9));

  const SampleSizeResult t2 = required_n(0.15, 0.4, 0.67, kGeneral, kErr);
  CHECK(t2.n_high == doctest::Approx(11395.4993254).epsilon(1e-9));
  CHECK(t2.n_star == doctest::Approx(9916.36474553).epsilon(1e-9));

  CHECK(t1.n_low <= t1.n_star);
  CHECK(t1.n_star <= t1.n_high);
}

TEST_CASE("required_n rejects a zero effect size") {
  CHECK_THROWS_AS(required_n(0.0, 0.5, 0.5, kEqual, kErr), std::domain_error);
}

TEST_CASE("round trip: solved sample sizes recover the target power") {
  std::mt19937_64 rng(20240517);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double term_cap = 2e-5;
  for (int i = 0; i < 200; ++i) {
    const double pi = 0.1 + 0.9 * u(rng);
    const double kappa = 0.05 + 0.95 * u(rng);
    const double alpha = 0.01 + 0.04 * u(rng);
    const double beta = 0.1 + 0.2 * u(rng);
    const ErrorSpec err{alpha, beta};
    const bool equal = i % 2 == 0;
    const double pz = equal ? 0.5 : 0.2 + 0.6 * u(rng);
    const AssumptionSet mode{equal ? AssignmentMode::kEqual : AssignmentMode::kGeneral,
                             true};
    const SampleSizeResult n = required_n(kappa, pi, pz, mode, err);

    const PowerBounds at_high = late_power_bounds({kappa, pi, n.n_high, pz}, mode, err);
    CHECK(std::fabs(at_high.lower - (1.0 - beta)) <= term_cap + neglected_term(err));
    const PowerBounds at_star = late_power_bounds({kappa, pi, n.n_star, pz}, mode, err);
    CHECK(std::fabs(*at_star.ordered_lower - (1.0 - beta)) <=
          term_cap + neglected_term(err));
  }
}

TEST_CASE("round trip: solved MDES recovers the target power") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double pi = 0.2 + 0.8 * u(rng);
    const double n = 500.0 + 20000.0 * u(rng);
    const ErrorSpec err{0.05, 0.2};
    const bool equal = i % 2 == 0;
    const double pz = equal ? 0.5 : 0.2 + 0.6 * u(rng);
    const AssumptionSet mode{equal ? AssignmentMode::kEqual : AssignmentMode::kGeneral,
                             true};
    const MdesResult k = mdes(pi, n, pz, mode, err);
    if (std::isfinite(k.kappa_high)) {
      const PowerBounds b = late_power_bounds({k.kappa_high, pi, n, pz}, mode, err);
      CHECK(std::fabs(b.lower - 0.8) <= 2e-5);
    }
    if (std::isfinite(k.kappa_star)) {
      const PowerBounds b = late_power_bounds({k.kappa_star, pi, n, pz}, mode, err);
      CHECK(std::fabs(*b.ordered_lower - 0.8) <= 2e-5);
    }
  }
}

TEST_CASE("E[nu^2] ceiling: brute force over the uptake base rate") {
  for (double pi = 0.1; pi <= 0.9 + 1e-9; pi += 0.1) {
    const double cap = (0.5 - pi / 2.0) * (0.5 + pi / 2.0);
    double best = -1.0, best_q0 = -1.0;
    for (double q0 = 0.0; q0 <= 1.0 - pi + 1e-12; q0 += 1e-4) {
      const double e = 0.5 * q0 * (1.0 - q0) +
                       0.5 * (q0 + pi) * (1.0 - q0 - pi);
      CHECK(e <= cap + 1e-12);
      if (e > best) {
        best = e;
        best_q0 = q0;
      }
    }
    CHECK(std::fabs(best_q0 - (0.5 - pi / 2.0)) <= 1e-4 + 1e-12);
    CHECK(best == doctest::Approx(cap).epsilon(1e-7));
  }
}

TEST_CASE("perfect-square identity guards the conservative denominator") {
  for (double kappa = 0.0; kappa <= 3.0; kappa += 0.05) {
    for (double v = 0.0; v <= 0.25; v += 0.01) {
      const double sv = std::sqrt(v);
      const double expanded = 1.0 + kappa * kappa * v - 2.0 * kappa * sv;
      const double square = (1.0 - kappa * sv) * (1.0 - kappa * sv);
      CHECK(std::fabs(expanded - square) <= 1e-12);
      CHECK(square >= 0.0);
    }
  }
}

TEST_CASE("covariate adjustment reduces exactly to the plain bounds at zero") {
  const DesignPoint d{0.37, 0.45, 2300.0, 0.5};
  const NcpBounds plain = ncp_bounds(d, kEqualOrdered);
  const NcpBounds adj = covariate_ncp_bounds(d, {0.0, 0.0}, kEqualOrdered);
  CHECK(adj.lower == plain.lower);
  CHECK(adj.upper == plain.upper);
  CHECK(adj.ordered == plain.ordered);
}

TEST_CASE("covariate-adjusted ordered bound frozen example") {
  const NcpBounds b =
      covariate_ncp_bounds({0.2, 0.5, 1500.0, 0.5}, {0.0, 0.5}, kEqualOrdered);
  CHECK(b.ordered == doctest::Approx(2.7183014110978118).epsilon(1e-12));
}

TEST_CASE("covariate ncp is weakly increasing in each R^2") {
  const DesignPoint d{0.3, 0.4, 1500.0, 0.5};
  double prev = covariate_ncp_bounds(d, {0.0, 0.0}, kEqual).lower;
  for (double r = 0.1; r < 1.0; r += 0.1) {
    const double cur = covariate_ncp_bounds(d, {r, 0.0}, kEqual).lower;
    CHECK(cur >= prev);
    prev = cur;
  }
  prev = covariate_ncp_bounds(d, {0.0, 0.0}, kEqual).ordered;
  for (double r = 0.1; r < 1.0; r += 0.1) {
    const double cur = covariate_ncp_bounds(d, {0.0, r}, kEqual).ordered;
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("covariate R^2 boundary is excluded") {
  const DesignPoint d{0.3, 0.4, 1500.0, 0.5};
  CHECK_THROWS_AS(covariate_ncp_bounds(d, {0.0, 1.0}, kEqual), std::domain_error);
  CHECK_THROWS_AS(covariate_ncp_bounds(d, {-0.1, 0.0}, kEqual), std::domain_error);
}

TEST_CASE("scaled ATE benchmark") {
  CHECK(scaled_ate_power(0.625, 0.2, 2500.0, 0.5, kErr) ==
        doctest::Approx(0.8779979765010351).epsilon(1e-12));
  // Same noncentrality from the full-compliance design it is scaled from.
  CHECK(scaled_ate_power(0.625, 1.0, 100.0, 0.5, kErr) ==
        doctest::Approx(0.8779979765010351).epsilon(1e-12));
  CHECK(scaled_ate_power(0.0, 0.2, 2500.0, 0.5, kErr) ==
        doctest::Approx(0.05).epsilon(1e-12));
}
