#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "latepower/power.hpp"
#include "latepower/strata.hpp"

namespace latepower {

struct SimConfig {
  std::int64_t n = 0;
  std::int64_t reps = 5000;
  double alpha = 0.05;
  std::uint64_t seed = 1;
};

struct SimResult {
  double power_late = 0.0;
  double power_itt = 0.0;
  double mcse_late = 0.0;
  double mcse_itt = 0.0;
  std::int64_t redraws = 0;
  // Set when more than 1% of replications had to be redrawn.
  bool high_redraw_rate = false;
};

// One draw of n units: stratum ~ multinomial(p_c, p_nt, p_at), Z ~
// Bernoulli(p_z), Y normal from the stratum/arm distribution. Overwrites the
// output vectors.
void generate_sample(const StrataSpec& spec, std::size_t n, std::mt19937_64& rng,
                     std::vector<double>& z, std::vector<double>& d,
                     std::vector<double>& y);

// Deterministic engine for replication `rep`, redraw attempt `attempt`.
// Results depend only on (seed, rep, attempt), never on scheduling.
std::mt19937_64 replication_rng(std::uint64_t seed, std::uint64_t rep,
                                std::uint64_t attempt);

// Rejection rates of the Wald IV and difference-in-means tests of a zero
// effect over cfg.reps independent replications. threads = 0 picks the
// hardware concurrency; the result is identical for any thread count.
SimResult simulate_power(const StrataSpec& spec, const SimConfig& cfg,
                         int threads = 0);

struct ValidatePoint {
  double kappa = 0.0;
  double tau = 0.0;
  double sim_power = 0.0;
  double mcse = 0.0;
  double lower = 0.0;
  double ordered_lower = 0.0;
  double upper = 0.0;
  bool contained = false;       // sim in [lower - 3 mcse, upper + 3 mcse]
  bool above_ordered = false;   // sim >= ordered_lower - 3 mcse
};

// For each kappa in the grid: solve tau, simulate, and compare against the
// analytic bounds at the spec's compliance rate and assignment probability.
std::vector<ValidatePoint> validate_bounds(const StrataSpec& base,
                                           std::span<const double> kappa_grid,
                                           const SimConfig& cfg,
                                           const ErrorSpec& err,
                                           AssignmentMode mode,
                                           int threads = 0);

// CSV with columns
// kappa,tau,sim_power,mcse,lower,ordered_lower,upper,contained,above_ordered
std::string validate_csv(const std::vector<ValidatePoint>& points);

struct CovarianceDiagnostics {
  double cov_zeta_nu = 0.0;
  double var_zeta = 0.0;
  double var_nu = 0.0;
  double se_cov = 0.0;          // standard error of the covariance estimate
  bool cauchy_schwarz_ok = false;
};

// From one generated sample of size cfg.n: residuals zeta_i (outcome net of
// assignment effect) and nu_i (uptake net of first stage), their covariance,
// and the sample Cauchy-Schwarz check |cov| <= sqrt(var var).
CovarianceDiagnostics covariance_diagnostics(const StrataSpec& spec,
                                             const SimConfig& cfg);

// A spec document is a strata object plus an optional "config" block.
struct SpecDocument {
  StrataSpec strata;
  std::optional<SimConfig> config;
};

SpecDocument parse_spec_document(const std::string& json_text);
std::string spec_document_to_json(const SpecDocument& doc);

}  // namespace latepower
