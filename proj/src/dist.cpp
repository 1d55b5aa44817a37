#include "latepower/dist.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace latepower {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double phi_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

void require_probability(double p, const char* name) {
  if (!(p > 0.0) || !(p < 1.0)) {
    std::ostringstream os;
    os << name << " must lie strictly in (0, 1), got " << p;
    throw std::domain_error(os.str());
  }
}

// Acklam's rational approximation to the normal quantile (|rel err| < 1.15e-9),
// used as the starting point for Halley refinement on phi_cdf.
double quantile_initial(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double phi_cdf(double x) {
  if (!std::isfinite(x)) throw std::domain_error("phi_cdf: input must be finite");
  return 0.5 * std::erfc(-x / kSqrt2);
}

double phi_inv(double p) {
  require_probability(p, "p");
  double x = quantile_initial(p);
  // Two Halley steps against phi_cdf; p = 0.5 stays exactly zero.
  for (int i = 0; i < 2; ++i) {
    const double err = phi_cdf(x) - p;
    const double u = err / phi_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double critical_value(double alpha) {
  require_probability(alpha, "alpha");
  return phi_inv(1.0 - 0.5 * alpha);
}

double multiplier(const ErrorSpec& err) {
  require_probability(err.alpha, "alpha");
  require_probability(err.beta, "beta");
  return critical_value(err.alpha) + phi_inv(1.0 - err.beta);
}

}  // namespace latepower
