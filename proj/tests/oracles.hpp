#pragma once

// Independent reference implementations used only to check the library.
// The normal CDF oracle combines a Maclaurin erf series (long double,
// term-by-term until convergence, well past 30 terms) with a continued
// fraction for the far tail; neither shares code with the library path.

#include <cmath>
#include <cstdint>

namespace oracle {

inline long double erf_series(long double x) {
  // erf(x) = 2/sqrt(pi) * sum_k (-1)^k x^(2k+1) / (k! (2k+1))
  const long double x2 = x * x;
  long double term = x;  // k = 0 term before the 2/sqrt(pi) factor
  long double sum = x;
  for (int k = 1; k < 400; ++k) {
    term *= -x2 / k;
    const long double contrib = term / (2 * k + 1);
    sum += contrib;
    if (std::fabs(contrib) < 1e-30L * std::fabs(sum)) break;
  }
  return sum * 2.0L / std::sqrt(3.14159265358979323846264338328L);
}

inline long double erfc_tail_cf(long double x) {
  // sqrt(pi) e^{x^2} erfc(x) = 1/(x + a1/(x + a2/(x + ...))), a_k = k/2
  long double t = 0.0L;
  for (int k = 120; k >= 1; --k) t = (0.5L * k) / (x + t);
  const long double cf = 1.0L / (x + t);
  return std::exp(-x * x) * cf / std::sqrt(3.14159265358979323846264338328L);
}

inline long double erfc_ref(long double x) {
  if (x < 0) return 2.0L - erfc_ref(-x);
  if (x < 4.0L) return 1.0L - erf_series(x);
  return erfc_tail_cf(x);
}

// |phi(x) - true| below ~1e-13 across the real line.
inline double phi(double x) {
  const long double ld = static_cast<long double>(x) / 1.41421356237309504880168872421L;
  if (x >= 0) return static_cast<double>(1.0L - 0.5L * erfc_ref(ld));
  return static_cast<double>(0.5L * erfc_ref(-ld));
}

inline double phi_inv(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double power_from_ncp(double ncp, double alpha) {
  const double c = phi_inv(1.0 - 0.5 * alpha);
  return phi(-c + ncp) + phi(-c - ncp);
}

}  // namespace oracle
