#pragma once

#include <optional>

#include "latepower/dist.hpp"

namespace latepower {

// Which substitution is used for E[nu^2] in the noncentrality bounds.
//   kEqual:   assignment probability fixed at 0.5; E[nu^2] set to its maximum
//             (0.5 - pi/2)(0.5 + pi/2).
//   kGeneral: any assignment probability, homoskedastic disturbance assumed;
//             E[nu^2] fixed at 0.25.
enum class AssignmentMode { kEqual, kGeneral };

struct AssumptionSet {
  AssignmentMode mode = AssignmentMode::kEqual;
  bool ordered_means = false;
};

// Investigation parameters. kappa is the standardized effect size
// tau / sqrt(E[Var(Y|Z)]); its absolute value is used throughout. pi is the
// first-stage effect (compliance rate), n the sample size (kept real;
// rounding is a presentation concern).
struct DesignPoint {
  double kappa = 0.0;
  double pi = 1.0;
  double n = 0.0;
  double p_z = 0.5;
};

// Precision gains from covariate adjustment, as shares of the variation in D
// (resp. Y) left unexplained by Z that the covariates explain. Both in [0,1).
struct CovariateAdjust {
  double r2_dw = 0.0;
  double r2_yw = 0.0;
};

// Noncentrality bounds; `ordered` is the middle value valid under the
// ordered-means assumption. `upper` is +infinity when the conservative
// denominator degenerates to zero.
struct NcpBounds {
  double lower = 0.0;
  double upper = 0.0;
  double ordered = 0.0;
};

struct PowerBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> ordered_lower;
};

// Solved minimum detectable effect sizes. kappa_high / kappa_star are
// +infinity when unattainable at the given sample size.
struct MdesResult {
  double kappa_low = 0.0;
  double kappa_high = 0.0;
  double kappa_star = 0.0;
};

// Solved sample sizes, returned as reals (n_low <= n_star <= n_high).
struct SampleSizeResult {
  double n_low = 0.0;
  double n_high = 0.0;
  double n_star = 0.0;
};

// Two-sided rejection probability at noncentrality ncp >= 0:
//   Phi(-c* + ncp) + Phi(-c* - ncp).
double power_from_ncp(double ncp, double alpha);

NcpBounds ncp_bounds(const DesignPoint& d, const AssumptionSet& a);

// Covariate-adjusted variant; reduces exactly to ncp_bounds when both R^2
// values are zero.
NcpBounds covariate_ncp_bounds(const DesignPoint& d, const CovariateAdjust& c,
                               const AssumptionSet& a);

// Power bounds for the two-sided test of a zero LATE. ordered_lower is
// populated when a.ordered_means is set.
PowerBounds late_power_bounds(const DesignPoint& d, const AssumptionSet& a,
                              const ErrorSpec& err,
                              const CovariateAdjust& c = {});

// Minimum detectable effect size at power 1 - beta (beta < 0.5).
MdesResult mdes(double pi, double n, double p_z, const AssumptionSet& a,
                const ErrorSpec& err);

// Required sample size at power 1 - beta (beta < 0.5), for effect size
// kappa > 0.
SampleSizeResult required_n(double kappa, double pi, double p_z,
                            const AssumptionSet& a, const ErrorSpec& err);

// Naive benchmark: ATE power analysis with the estimator variance divided by
// the compliance rate squared, i.e. power at ncp = kappa*pi*sqrt(N pz (1-pz)).
double scaled_ate_power(double kappa, double pi, double n, double p_z,
                        const ErrorSpec& err);

}  // namespace latepower
