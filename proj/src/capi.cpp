#include "latepower.h"

#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "latepower/errors.hpp"
#include "latepower/estimators.hpp"
#include "latepower/power.hpp"
#include "latepower/sim.hpp"
#include "latepower/strata.hpp"
#include "latepower/table_diag.hpp"
#include "latepower/tables.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const char* msg) { g_last_error = msg == nullptr ? "" : msg; }

// Runs the body, translating exceptions into status codes.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return LP_OK;
  } catch (const latepower::parse_error& e) {
    set_error(e.what());
    return LP_ERR_PARSE;
  } catch (const latepower::infeasible_error& e) {
    set_error(e.what());
    return LP_ERR_INFEASIBLE;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return LP_ERR_DOMAIN;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return LP_ERR_DOMAIN;
  } catch (const std::exception& e) {
    set_error(e.what());
    return LP_ERR_INTERNAL;
  }
}

int require_args(bool ok) {
  if (!ok) set_error("null pointer argument");
  return ok ? LP_OK : LP_ERR_DOMAIN;
}

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

latepower::AssignmentMode to_mode(int mode) {
  if (mode == LP_MODE_EQUAL) return latepower::AssignmentMode::kEqual;
  if (mode == LP_MODE_GENERAL) return latepower::AssignmentMode::kGeneral;
  throw std::domain_error("mode must be LP_MODE_EQUAL or LP_MODE_GENERAL");
}

latepower::StrataSpec to_spec(const lp_strata_params& p) {
  latepower::StrataSpec s;
  s.mu_c0 = p.mu_c0;
  s.sd_c0 = p.sd_c0;
  s.sd_c1 = p.sd_c1;
  s.tau = p.tau;
  s.mu_nt = p.mu_nt;
  s.sd_nt = p.sd_nt;
  s.mu_at = p.mu_at;
  s.sd_at = p.sd_at;
  s.p_c = p.p_c;
  s.p_nt = p.p_nt;
  s.p_at = p.p_at;
  s.p_z = p.p_z;
  return s;
}

}  // namespace

struct lp_spec {
  latepower::StrataSpec strata;
  std::optional<latepower::SimConfig> config;
};

extern "C" {

const char* lp_version(void) { return "1.0.0"; }

const char* lp_last_error(void) { return g_last_error.c_str(); }

void lp_string_free(char* s) { delete[] s; }

int lp_phi_cdf(double x, double* out) {
  if (int rc = require_args(out != nullptr)) return rc;
  return guarded([&] { *out = latepower::phi_cdf(x); });
}

int lp_phi_inv(double p, double* out) {
  if (int rc = require_args(out != nullptr)) return rc;
  return guarded([&] { *out = latepower::phi_inv(p); });
}

int lp_multiplier(double alpha, double beta, double* out) {
  if (int rc = require_args(out != nullptr)) return rc;
  return guarded([&] { *out = latepower::multiplier({alpha, beta}); });
}

int lp_power_from_ncp(double ncp, double alpha, double* out) {
  if (int rc = require_args(out != nullptr)) return rc;
  return guarded([&] { *out = latepower::power_from_ncp(ncp, alpha); });
}

int lp_ncp_bounds(double kappa, double pi, double n, double p_z, int mode,
                  double r2_dw, double r2_yw, double* lower, double* upper,
                  double* ordered) {
  if (int rc = require_args(lower && upper && ordered)) return rc;
  return guarded([&] {
    const latepower::DesignPoint d{kappa, pi, n, p_z};
    const latepower::AssumptionSet a{to_mode(mode), false};
    const latepower::NcpBounds b =
        latepower::covariate_ncp_bounds(d, {r2_dw, r2_yw}, a);
    *lower = b.lower;
    *upper = b.upper;
    *ordered = b.ordered;
  });
}

int lp_late_power_bounds(double kappa, double pi, double n, double p_z, int mode,
                         int ordered, double r2_dw, double r2_yw, double alpha,
                         lp_power_bounds* out) {
  if (int rc = require_args(out != nullptr)) return rc;
  return guarded([&] {
    const latepower::DesignPoint d{kappa, pi, n, p_z};
    const latepower::AssumptionSet a{to_mode(mode), ordered != 0};
    const latepower::PowerBounds b =
        latepower::late_power_bounds(d, a, {alpha, 0.2}, {r2_dw, r2_yw});
    out->lower = b.lower;
    out->upper = b.upper;
    out->has_ordered = b.ordered_lower.has_value() ? 1 : 0;
    out->ordered_lower = b.ordered_lower.value_or(0.0);
  });
}

int lp_mdes(double pi, double n, double p_z, int mode, double alpha, double beta,
            lp_mdes_result* out) {
  if (int rc = require_args(out != nullptr)) return rc;
  return guarded([&] {
    const latepower::MdesResult r =
        latepower::mdes(pi, n, p_z, {to_mode(mode), false}, {alpha, beta});
    out->kappa_low = r.kappa_low;
    out->kappa_high = r.kappa_high;
    out->kappa_star = r.kappa_star;
  });
}

int lp_required_n(double kappa, double pi, double p_z, int mode, double alpha,
                  double beta, lp_n_result* out) {
  if (int rc = require_args(out != nullptr)) return rc;
  return guarded([&] {
    const latepower::SampleSizeResult r =
        latepower::required_n(kappa, pi, p_z, {to_mode(mode), false}, {alpha, beta});
    out->n_low = r.n_low;
    out->n_high = r.n_high;
    out->n_star = r.n_star;
  });
}

int lp_scaled_ate_power(double kappa, double pi, double n, double p_z,
                        double alpha, double* out) {
  if (int rc = require_args(out != nullptr)) return rc;
  return guarded(
      [&] { *out = latepower::scaled_ate_power(kappa, pi, n, p_z, {alpha, 0.2}); });
}

lp_spec* lp_spec_create(const lp_strata_params* params) {
  if (params == nullptr) {
    set_error("null pointer argument");
    return nullptr;
  }
  lp_spec* spec = nullptr;
  const int rc = guarded([&] {
    auto s = to_spec(*params);
    latepower::validate(s);
    spec = new lp_spec{s, std::nullopt};
  });
  return rc == LP_OK ? spec : nullptr;
}

lp_spec* lp_spec_parse(const char* json_text) {
  if (json_text == nullptr) {
    set_error("null pointer argument");
    return nullptr;
  }
  lp_spec* spec = nullptr;
  const int rc = guarded([&] {
    const latepower::SpecDocument doc = latepower::parse_spec_document(json_text);
    spec = new lp_spec{doc.strata, doc.config};
  });
  return rc == LP_OK ? spec : nullptr;
}

void lp_spec_free(lp_spec* spec) { delete spec; }

int lp_spec_params(const lp_spec* spec, lp_strata_params* out) {
  if (int rc = require_args(spec && out)) return rc;
  const latepower::StrataSpec& s = spec->strata;
  *out = {s.mu_c0, s.sd_c0, s.sd_c1, s.tau, s.mu_nt, s.sd_nt,
          s.mu_at, s.sd_at, s.p_c,  s.p_nt, s.p_at, s.p_z};
  return LP_OK;
}

int lp_spec_config(const lp_spec* spec, lp_sim_config* out, int* has_config) {
  if (int rc = require_args(spec && out && has_config)) return rc;
  *has_config = spec->config.has_value() ? 1 : 0;
  if (spec->config) {
    *out = {spec->config->n, spec->config->reps, spec->config->alpha,
            spec->config->seed};
  }
  return LP_OK;
}

char* lp_spec_to_json(const lp_spec* spec) {
  if (spec == nullptr) {
    set_error("null pointer argument");
    return nullptr;
  }
  char* out = nullptr;
  guarded([&] {
    out = dup_string(
        latepower::spec_document_to_json({spec->strata, spec->config}));
  });
  return out;
}

int lp_spec_kappa(const lp_spec* spec, double* out) {
  if (int rc = require_args(spec && out)) return rc;
  return guarded([&] { *out = latepower::kappa_of_spec(spec->strata); });
}

int lp_spec_tau_for_kappa(const lp_spec* spec, double kappa, double* tau) {
  if (int rc = require_args(spec && tau)) return rc;
  return guarded([&] { *tau = latepower::tau_for_kappa(spec->strata, kappa); });
}

int lp_spec_ordered_means(const lp_spec* spec, double* ybar_nt, double* ybar_c,
                          double* ybar_at, int* satisfied) {
  if (int rc = require_args(spec && ybar_nt && ybar_c && ybar_at && satisfied)) {
    return rc;
  }
  return guarded([&] {
    const latepower::OrderedMeans om = latepower::ordered_means_of_spec(spec->strata);
    *ybar_nt = om.ybar_nt;
    *ybar_c = om.ybar_c;
    *ybar_at = om.ybar_at;
    *satisfied = om.satisfied ? 1 : 0;
  });
}

int lp_simulate(const lp_spec* spec, const lp_sim_config* cfg, int threads,
                lp_sim_result* out) {
  if (int rc = require_args(spec && cfg && out)) return rc;
  return guarded([&] {
    const latepower::SimConfig c{cfg->n, cfg->reps, cfg->alpha, cfg->seed};
    const latepower::SimResult r = latepower::simulate_power(spec->strata, c, threads);
    *out = {r.power_late, r.power_itt,          r.mcse_late,
            r.mcse_itt,   r.redraws,            r.high_redraw_rate ? 1 : 0};
  });
}

namespace {

std::vector<latepower::ValidatePoint> run_validate(
    const lp_spec* spec, const double* kappa_grid, int64_t n_points,
    const lp_sim_config* cfg, int mode, int threads) {
  if (n_points <= 0) throw std::domain_error("kappa grid must be nonempty");
  const latepower::SimConfig c{cfg->n, cfg->reps, cfg->alpha, cfg->seed};
  return latepower::validate_bounds(
      spec->strata, std::span<const double>(kappa_grid, static_cast<std::size_t>(n_points)),
      c, {c.alpha, 0.2}, to_mode(mode), threads);
}

}  // namespace

int lp_validate_bounds(const lp_spec* spec, const double* kappa_grid,
                       int64_t n_points, const lp_sim_config* cfg, int mode,
                       int threads, lp_validate_point* out_points) {
  if (int rc = require_args(spec && kappa_grid && cfg && out_points)) return rc;
  return guarded([&] {
    const auto points = run_validate(spec, kappa_grid, n_points, cfg, mode, threads);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& p = points[i];
      out_points[i] = {p.kappa,         p.tau,   p.sim_power,
                       p.mcse,          p.lower, p.ordered_lower,
                       p.upper,         p.contained ? 1 : 0,
                       p.above_ordered ? 1 : 0};
    }
  });
}

char* lp_validate_bounds_csv(const lp_spec* spec, const double* kappa_grid,
                             int64_t n_points, const lp_sim_config* cfg,
                             int mode, int threads) {
  if (require_args(spec && kappa_grid && cfg) != LP_OK) return nullptr;
  char* out = nullptr;
  guarded([&] {
    out = dup_string(latepower::validate_csv(
        run_validate(spec, kappa_grid, n_points, cfg, mode, threads)));
  });
  return out;
}

int lp_wald_iv(const double* z, const double* d, const double* y, int64_t n,
               double alpha, double* tau_hat, double* var_hat, double* zstat,
               int* reject, int* degenerate) {
  if (int rc = require_args(z && d && y && tau_hat && var_hat && zstat &&
                            reject && degenerate)) {
    return rc;
  }
  return guarded([&] {
    const auto sz = static_cast<std::size_t>(n);
    const auto fit = latepower::wald_iv_estimate({z, sz}, {d, sz}, {y, sz}, alpha);
    *degenerate = fit ? 0 : 1;
    *tau_hat = fit ? fit->tau_hat : 0.0;
    *var_hat = fit ? fit->var_hat : 0.0;
    *zstat = fit ? fit->z : 0.0;
    *reject = fit && fit->reject ? 1 : 0;
  });
}

int lp_itt(const double* z, const double* y, int64_t n, double alpha,
           double* gamma_hat, double* var_hat, double* zstat, int* reject,
           int* degenerate) {
  if (int rc = require_args(z && y && gamma_hat && var_hat && zstat && reject &&
                            degenerate)) {
    return rc;
  }
  return guarded([&] {
    const auto sz = static_cast<std::size_t>(n);
    const auto fit = latepower::itt_estimate({z, sz}, {y, sz}, alpha);
    *degenerate = fit ? 0 : 1;
    *gamma_hat = fit ? fit->gamma_hat : 0.0;
    *var_hat = fit ? fit->var_hat : 0.0;
    *zstat = fit ? fit->z : 0.0;
    *reject = fit && fit->reject ? 1 : 0;
  });
}

int lp_stratum_means_from_table(const int64_t counts[4], const double means[4],
                                lp_table_diag* out) {
  if (int rc = require_args(counts && means && out)) return rc;
  return guarded([&] {
    latepower::ObservedTable t;
    t.z0_d0 = {counts[0], means[0]};
    t.z0_d1 = {counts[1], means[1]};
    t.z1_d0 = {counts[2], means[2]};
    t.z1_d1 = {counts[3], means[3]};
    const latepower::StratumMeansDiag d = latepower::stratum_means_from_table(t);
    *out = {d.p_c,     d.p_nt,    d.p_at,
            d.ybar_c,  d.ybar_nt, d.ybar_at,
            d.has_nt ? 1 : 0,     d.has_at ? 1 : 0,
            d.ordered_satisfied ? 1 : 0};
  });
}

int lp_covariance_diagnostics(const lp_spec* spec, int64_t n, uint64_t seed,
                              double* cov_zeta_nu, double* var_zeta,
                              double* var_nu, double* se_cov,
                              int* cauchy_schwarz_ok) {
  if (int rc = require_args(spec && cov_zeta_nu && var_zeta && var_nu && se_cov &&
                            cauchy_schwarz_ok)) {
    return rc;
  }
  return guarded([&] {
    latepower::SimConfig cfg;
    cfg.n = n;
    cfg.reps = 1;
    cfg.seed = seed;
    const auto d = latepower::covariance_diagnostics(spec->strata, cfg);
    *cov_zeta_nu = d.cov_zeta_nu;
    *var_zeta = d.var_zeta;
    *var_nu = d.var_nu;
    *se_cov = d.se_cov;
    *cauchy_schwarz_ok = d.cauchy_schwarz_ok ? 1 : 0;
  });
}

char* lp_table_csv(const char* which, int64_t reps, uint64_t seed, int threads) {
  if (which == nullptr) {
    set_error("null pointer argument");
    return nullptr;
  }
  char* out = nullptr;
  guarded([&] {
    out = dup_string(latepower::tables::table_csv(which, reps, seed, threads));
  });
  return out;
}

}  // extern "C"
