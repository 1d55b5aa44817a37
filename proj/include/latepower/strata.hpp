#pragma once

#include <string>

namespace latepower {

// A principal-strata superpopulation. Outcomes are normal within stratum and
// assignment arm; compliers take the treatment exactly when assigned, so their
// treated mean is mu_c0 + tau. Never-takers only ever show their control
// distribution, always-takers only their treated distribution.
//
// Proportions must satisfy p_c + p_nt + p_at == 1 (within 1e-12), p_c > 0.
struct StrataSpec {
  double mu_c0 = 0.0;
  double sd_c0 = 1.0;
  double sd_c1 = 1.0;
  double tau = 0.0;
  double mu_nt = 0.0;
  double sd_nt = 1.0;
  double mu_at = 0.0;
  double sd_at = 1.0;
  double p_c = 1.0;
  double p_nt = 0.0;
  double p_at = 0.0;
  double p_z = 0.5;
};

// Throws std::invalid_argument naming the violated constraint.
void validate(const StrataSpec& spec);

// Standardized effect size tau / sqrt(E[Var(Y|Z)]), with the within-arm
// variances computed from the three-component mixture moments of the
// observed outcome distributions.
double kappa_of_spec(const StrataSpec& spec);

// Inverts kappa_of_spec in tau by bisection (|kappa(tau) - target| <= 1e-10).
// base.tau is ignored. Throws infeasible_error when the target exceeds the
// attainable effect size or the bracket is not monotone.
double tau_for_kappa(const StrataSpec& base, double kappa_target);

struct OrderedMeans {
  double ybar_nt = 0.0;
  double ybar_c = 0.0;
  double ybar_at = 0.0;
  bool satisfied = false;
};

// Expected observed outcome means by stratum and the ordered-means verdict
// ybar_nt <= ybar_c <= ybar_at. A stratum with proportion < 1e-9 is treated
// as vacuously ordered.
OrderedMeans ordered_means_of_spec(const StrataSpec& spec);

// JSON (de)serialization. Accepts either a flat object of the fields above or
// an object with the fields under a "strata" key. An optional "family" field
// must be "normal".
StrataSpec strata_from_json(const std::string& text);
std::string strata_to_json(const StrataSpec& spec);

}  // namespace latepower
