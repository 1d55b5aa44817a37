#include "latepower/power.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace latepower {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDegenerateDenom = 1e-12;

void require(bool ok, const char* msg) {
  if (!ok) throw std::domain_error(msg);
}

void check_design(const DesignPoint& d) {
  require(std::isfinite(d.kappa), "kappa must be finite");
  require(d.pi > 0.0 && d.pi <= 1.0, "pi must lie in (0, 1]");
  require(d.p_z > 0.0 && d.p_z < 1.0, "p_z must lie in (0, 1)");
  require(d.n > 0.0 && std::isfinite(d.n), "n must be positive");
}

void check_adjust(const CovariateAdjust& c) {
  require(c.r2_dw >= 0.0 && c.r2_dw < 1.0, "r2_dw must lie in [0, 1)");
  require(c.r2_yw >= 0.0 && c.r2_yw < 1.0, "r2_yw must lie in [0, 1)");
}

// E[nu^2] substitution and the numerator scale for the chosen mode.
struct ModeTerms {
  double e_nu2;
  double numerator;  // kappa^2 n pi^2 times the assignment-variance factor
};

ModeTerms mode_terms(const DesignPoint& d, const AssumptionSet& a, double kappa) {
  if (a.mode == AssignmentMode::kEqual) {
    require(d.p_z == 0.5, "equal-assignment bounds require p_z = 0.5");
    const double v = (0.5 - d.pi / 2.0) * (0.5 + d.pi / 2.0);
    return {v, 0.25 * kappa * kappa * d.n * d.pi * d.pi};
  }
  return {0.25, d.p_z * (1.0 - d.p_z) * kappa * kappa * d.n * d.pi * d.pi};
}

}  // namespace

double power_from_ncp(double ncp, double alpha) {
  if (std::isinf(ncp) && ncp > 0.0) return 1.0;  // degenerate upper bound
  require(std::isfinite(ncp) && ncp >= 0.0, "ncp must be nonnegative");
  const double c = critical_value(alpha);
  return phi_cdf(-c + ncp) + phi_cdf(-c - ncp);
}

NcpBounds covariate_ncp_bounds(const DesignPoint& d, const CovariateAdjust& c,
                               const AssumptionSet& a) {
  check_design(d);
  check_adjust(c);
  const double kappa = std::fabs(d.kappa);
  const auto [e_nu2, numerator] = mode_terms(d, a, kappa);

  const double fy = 1.0 - c.r2_yw;
  const double fd = 1.0 - c.r2_dw;
  const double cross = kappa * std::sqrt(fd * e_nu2);

  NcpBounds out;
  const double denom_lower = fy + kappa * kappa * fd * e_nu2 +
                             2.0 * cross * std::sqrt(fy);
  const double denom_mid = fy + kappa * kappa * fd * e_nu2;
  // '-' denominator written as the perfect square (sqrt(fy) - kappa sqrt(fd E))^2
  // so it cannot go negative from rounding.
  const double root = std::sqrt(fy) - cross;
  const double denom_upper = root * root;

  out.lower = std::sqrt(numerator / denom_lower);
  out.ordered = std::sqrt(numerator / denom_mid);
  out.upper = denom_upper < kDegenerateDenom ? kInf
                                             : std::sqrt(numerator / denom_upper);
  return out;
}

NcpBounds ncp_bounds(const DesignPoint& d, const AssumptionSet& a) {
  return covariate_ncp_bounds(d, CovariateAdjust{}, a);
}

PowerBounds late_power_bounds(const DesignPoint& d, const AssumptionSet& a,
                              const ErrorSpec& err, const CovariateAdjust& c) {
  const NcpBounds ncp = covariate_ncp_bounds(d, c, a);
  PowerBounds out;
  out.lower = power_from_ncp(ncp.lower, err.alpha);
  out.upper = power_from_ncp(ncp.upper, err.alpha);
  if (a.ordered_means) out.ordered_lower = power_from_ncp(ncp.ordered, err.alpha);
  return out;
}

MdesResult mdes(double pi, double n, double p_z, const AssumptionSet& a,
                const ErrorSpec& err) {
  check_design(DesignPoint{1.0, pi, n, p_z});
  require(err.beta < 0.5, "beta must be below 0.5 for the one-term solvers");
  const double m = multiplier(err);

  MdesResult out;
  if (a.mode == AssignmentMode::kEqual) {
    require(p_z == 0.5, "equal-assignment bounds require p_z = 0.5");
    const double v = (0.5 - pi / 2.0) * (0.5 + pi / 2.0);
    const double sv = std::sqrt(v);
    const double base = pi * std::sqrt(n);
    out.kappa_low = 2.0 * m / (base + 2.0 * m * sv);
    const double denom_high = base - 2.0 * m * sv;
    out.kappa_high = denom_high > 0.0 ? 2.0 * m / denom_high : kInf;
    const double radicand = n * pi * pi - 4.0 * m * m * v;
    out.kappa_star = radicand > 0.0 ? 2.0 * m / std::sqrt(radicand) : kInf;
    return out;
  }
  const double base = 2.0 * pi * std::sqrt(n * p_z * (1.0 - p_z));
  out.kappa_low = 2.0 * m / (base + m);
  const double denom_high = base - m;
  out.kappa_high = denom_high > 0.0 ? 2.0 * m / denom_high : kInf;
  const double radicand = base * base - m * m;
  out.kappa_star = radicand > 0.0 ? 2.0 * m / std::sqrt(radicand) : kInf;
  return out;
}

SampleSizeResult required_n(double kappa, double pi, double p_z,
                            const AssumptionSet& a, const ErrorSpec& err) {
  require(std::isfinite(kappa) && kappa != 0.0, "kappa must be nonzero");
  kappa = std::fabs(kappa);
  require(pi > 0.0 && pi <= 1.0, "pi must lie in (0, 1]");
  require(p_z > 0.0 && p_z < 1.0, "p_z must lie in (0, 1)");
  require(err.beta < 0.5, "beta must be below 0.5 for the one-term solvers");
  const double m = multiplier(err);

  SampleSizeResult out;
  if (a.mode == AssignmentMode::kEqual) {
    require(p_z == 0.5, "equal-assignment bounds require p_z = 0.5");
    const double v = (0.5 - pi / 2.0) * (0.5 + pi / 2.0);
    const double sv = std::sqrt(v);
    const double lead = 4.0 * m * m / (kappa * kappa * pi * pi);
    out.n_low = lead * (1.0 + kappa * kappa * v - 2.0 * kappa * sv);
    out.n_high = lead * (1.0 + kappa * kappa * v + 2.0 * kappa * sv);
    out.n_star = lead * (1.0 + kappa * kappa * v);
    return out;
  }
  const double lead = m * m / (p_z * (1.0 - p_z) * kappa * kappa * pi * pi);
  out.n_low = lead * (1.0 + 0.25 * kappa * kappa - kappa);
  out.n_high = lead * (1.0 + 0.25 * kappa * kappa + kappa);
  out.n_star = lead * (1.0 + 0.25 * kappa * kappa);
  return out;
}

double scaled_ate_power(double kappa, double pi, double n, double p_z,
                        const ErrorSpec& err) {
  require(std::isfinite(kappa) && kappa >= 0.0, "kappa must be nonnegative");
  check_design(DesignPoint{1.0, pi, n, p_z});
  return power_from_ncp(kappa * pi * std::sqrt(n * p_z * (1.0 - p_z)), err.alpha);
}

}  // namespace latepower
