#include "latepower/estimators.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "latepower/dist.hpp"

namespace latepower {

namespace {

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

}  // namespace

std::optional<WaldFit> wald_iv_estimate(std::span<const double> z,
                                        std::span<const double> d,
                                        std::span<const double> y, double alpha) {
  const std::size_t n = z.size();
  if (n < 2 || d.size() != n || y.size() != n) {
    throw std::invalid_argument("wald_iv_estimate: vectors must share length >= 2");
  }
  const double cstar = critical_value(alpha);

  const double zb = mean_of(z);
  const double db = mean_of(d);
  const double yb = mean_of(y);
  double szd = 0.0, szy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double zc = z[i] - zb;
    szd += zc * (d[i] - db);
    szy += zc * (y[i] - yb);
  }
  szd /= static_cast<double>(n);
  szy /= static_cast<double>(n);
  if (szd == 0.0) return std::nullopt;  // no first stage in this draw

  WaldFit fit;
  fit.tau_hat = szy / szd;
  double meat = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double eps = y[i] - yb - fit.tau_hat * (d[i] - db);
    const double zc = z[i] - zb;
    meat += eps * eps * zc * zc;
  }
  meat /= static_cast<double>(n);
  fit.var_hat = meat / (static_cast<double>(n) * szd * szd);

  const double se = std::sqrt(fit.var_hat);
  fit.reject = std::fabs(fit.tau_hat) > cstar * se;
  fit.z = se > 0.0 ? fit.tau_hat / se : (fit.tau_hat == 0.0 ? 0.0 : std::copysign(HUGE_VAL, fit.tau_hat));
  return fit;
}

std::optional<IttFit> itt_estimate(std::span<const double> z,
                                   std::span<const double> y, double alpha) {
  const std::size_t n = z.size();
  if (n < 2 || y.size() != n) {
    throw std::invalid_argument("itt_estimate: vectors must share length >= 2");
  }
  const double cstar = critical_value(alpha);

  double n1 = 0.0, n0 = 0.0, s1 = 0.0, s0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (z[i] > 0.5) {
      n1 += 1.0;
      s1 += y[i];
    } else {
      n0 += 1.0;
      s0 += y[i];
    }
  }
  if (n1 < 2.0 || n0 < 2.0) return std::nullopt;  // arm too small to estimate

  const double m1 = s1 / n1;
  const double m0 = s0 / n0;
  double ss1 = 0.0, ss0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (z[i] > 0.5) {
      const double c = y[i] - m1;
      ss1 += c * c;
    } else {
      const double c = y[i] - m0;
      ss0 += c * c;
    }
  }
  IttFit fit;
  fit.gamma_hat = m1 - m0;
  fit.var_hat = ss1 / (n1 - 1.0) / n1 + ss0 / (n0 - 1.0) / n0;
  const double se = std::sqrt(fit.var_hat);
  fit.reject = std::fabs(fit.gamma_hat) > cstar * se;
  fit.z = se > 0.0 ? fit.gamma_hat / se : (fit.gamma_hat == 0.0 ? 0.0 : std::copysign(HUGE_VAL, fit.gamma_hat));
  return fit;
}

}  // namespace latepower
