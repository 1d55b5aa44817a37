#pragma once

namespace latepower {

// Error tolerances for a two-sided test: alpha is the type-I rate, beta the
// type-II rate at the design's target power (power = 1 - beta).
struct ErrorSpec {
  double alpha = 0.05;
  double beta = 0.20;
};

// Standard normal CDF. |abs error| <= 1e-12 over the real line.
// Throws std::domain_error for non-finite input.
double phi_cdf(double x);

// Standard normal quantile, 0 < p < 1. phi_inv(0.5) == 0 exactly and
// |phi_cdf(phi_inv(p)) - p| <= 1e-10. Throws std::domain_error outside (0,1).
double phi_inv(double p);

// Two-sided critical value c* = phi_inv(1 - alpha/2).
double critical_value(double alpha);

// M = phi_inv(1 - alpha/2) + phi_inv(1 - beta).
double multiplier(const ErrorSpec& err);

}  // namespace latepower
