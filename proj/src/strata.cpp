#include "latepower/strata.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "latepower/errors.hpp"

namespace latepower {

namespace {

constexpr double kVacuousStratum = 1e-9;

void fail(const std::string& msg) { throw std::invalid_argument(msg); }

// Variance of a three-component normal mixture from component moments.
double mixture_variance(const double w[3], const double mu[3],
                        const double sd[3]) {
  double mean = 0.0, second = 0.0;
  for (int i = 0; i < 3; ++i) {
    mean += w[i] * mu[i];
    second += w[i] * (sd[i] * sd[i] + mu[i] * mu[i]);
  }
  return second - mean * mean;
}

double arm_variance(const StrataSpec& s, bool treated_arm) {
  const double w[3] = {s.p_c, s.p_nt, s.p_at};
  const double mu[3] = {treated_arm ? s.mu_c0 + s.tau : s.mu_c0, s.mu_nt, s.mu_at};
  const double sd[3] = {treated_arm ? s.sd_c1 : s.sd_c0, s.sd_nt, s.sd_at};
  return mixture_variance(w, mu, sd);
}

double expected_within_arm_variance(const StrataSpec& s) {
  return s.p_z * arm_variance(s, true) + (1.0 - s.p_z) * arm_variance(s, false);
}

}  // namespace

void validate(const StrataSpec& spec) {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(spec.mu_c0) || !finite(spec.tau) || !finite(spec.mu_nt) ||
      !finite(spec.mu_at)) {
    fail("strata means and tau must be finite");
  }
  if (!(spec.sd_c0 > 0.0) || !(spec.sd_c1 > 0.0) || !(spec.sd_nt > 0.0) ||
      !(spec.sd_at > 0.0)) {
    fail("all standard deviations must be positive");
  }
  if (!(spec.p_c > 0.0)) fail("p_c must be positive");
  if (spec.p_nt < 0.0 || spec.p_at < 0.0) fail("stratum proportions must be nonnegative");
  if (std::fabs(spec.p_c + spec.p_nt + spec.p_at - 1.0) > 1e-12) {
    fail("p_c + p_nt + p_at must equal 1");
  }
  if (!(spec.p_z > 0.0) || !(spec.p_z < 1.0)) fail("p_z must lie in (0, 1)");
}

double kappa_of_spec(const StrataSpec& spec) {
  validate(spec);
  const double ev = expected_within_arm_variance(spec);
  if (!(ev > 0.0)) throw std::domain_error("expected within-arm variance is zero");
  return spec.tau / std::sqrt(ev);
}

double tau_for_kappa(const StrataSpec& base, double kappa_target) {
  validate(base);
  if (!(kappa_target >= 0.0) || !std::isfinite(kappa_target)) {
    throw std::domain_error("kappa target must be nonnegative and finite");
  }
  if (kappa_target == 0.0) return 0.0;

  StrataSpec s = base;
  auto kappa_at = [&s](double tau) {
    s.tau = tau;
    return kappa_of_spec(s);
  };

  // Bracket by doubling; kappa(tau) saturates when the complier means spread
  // dominates the mixture variance, so a plateau means the target is out of
  // reach.
  double lo = 0.0, hi = std::sqrt(expected_within_arm_variance(base));
  double k_prev = kappa_at(hi);
  int doublings = 0;
  while (k_prev < kappa_target) {
    hi *= 2.0;
    const double k = kappa_at(hi);
    if (k <= k_prev) {
      std::ostringstream os;
      os << "kappa(tau) is not increasing near tau = " << hi
         << " (kappa = " << k << "); target " << kappa_target
         << " is unattainable for this spec";
      throw infeasible_error(os.str());
    }
    k_prev = k;
    if (++doublings > 200) {
      throw infeasible_error("kappa target unattainable: bracket exhausted");
    }
  }

  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double k = kappa_at(mid);
    if (std::fabs(k - kappa_target) <= 1e-10) return mid;
    (k < kappa_target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

OrderedMeans ordered_means_of_spec(const StrataSpec& spec) {
  validate(spec);
  OrderedMeans out;
  out.ybar_nt = spec.mu_nt;
  out.ybar_at = spec.mu_at;
  out.ybar_c = spec.mu_c0 + spec.p_z * spec.tau;
  const bool nt_ok = spec.p_nt < kVacuousStratum || out.ybar_nt <= out.ybar_c;
  const bool at_ok = spec.p_at < kVacuousStratum || out.ybar_c <= out.ybar_at;
  out.satisfied = nt_ok && at_ok;
  return out;
}

}  // namespace latepower
