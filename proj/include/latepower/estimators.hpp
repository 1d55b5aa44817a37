#pragma once

#include <optional>
#include <span>

namespace latepower {

// Wald IV fit: tau_hat = cov(Y,Z)/cov(D,Z), plug-in asymptotic variance
//   var_hat = mean(eps_i^2 (Z_i - Zbar)^2) / (n * cov(D,Z)^2)
// with eps_i = Y_i - Ybar - tau_hat (D_i - Dbar). Covariances use the 1/n
// convention (the ratio and the variance are normalization-consistent).
struct WaldFit {
  double tau_hat = 0.0;
  double var_hat = 0.0;
  double z = 0.0;
  bool reject = false;
};

// Difference-in-means fit for the effect of assignment, with the two-sample
// variance s1^2/n1 + s0^2/n0 (unbiased arm variances).
struct IttFit {
  double gamma_hat = 0.0;
  double var_hat = 0.0;
  double z = 0.0;
  bool reject = false;
};

// nullopt signals a degenerate sample (an assignment arm with fewer than two
// units, or zero first-stage covariance); callers redraw.
std::optional<WaldFit> wald_iv_estimate(std::span<const double> z,
                                        std::span<const double> d,
                                        std::span<const double> y, double alpha);

std::optional<IttFit> itt_estimate(std::span<const double> z,
                                   std::span<const double> y, double alpha);

}  // namespace latepower
