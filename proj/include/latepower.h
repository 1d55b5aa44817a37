/* latepower — power bounds, MDES and sample-size solvers for the Wald IV
 * estimator of a local average treatment effect, plus a principal-strata
 * Monte-Carlo simulator.
 *
 * C binding of the C++ core. All functions return a status code (LP_OK on
 * success); lp_last_error() holds a thread-local message for the most recent
 * failure on the calling thread. Strata superpopulations are held behind the
 * opaque lp_spec handle. Strings returned as char* are owned by the caller
 * and released with lp_string_free().
 */
#ifndef LATEPOWER_H
#define LATEPOWER_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  LP_OK = 0,
  LP_ERR_DOMAIN = 1,     /* a precondition on the inputs was violated */
  LP_ERR_INFEASIBLE = 2, /* inputs valid but the result is unattainable */
  LP_ERR_PARSE = 3,      /* malformed JSON document */
  LP_ERR_INTERNAL = 4
};

/* E[nu^2] substitution for the noncentrality bounds. LP_MODE_EQUAL requires
 * assignment probability 0.5 and uses the binary-uptake maximum
 * (0.5 - pi/2)(0.5 + pi/2); LP_MODE_GENERAL allows any assignment
 * probability under homoskedasticity with E[nu^2] = 0.25. */
enum { LP_MODE_EQUAL = 0, LP_MODE_GENERAL = 1 };

const char* lp_version(void);
const char* lp_last_error(void);
void lp_string_free(char* s);

/* --- normal kernel ------------------------------------------------------- */

int lp_phi_cdf(double x, double* out);
int lp_phi_inv(double p, double* out);
/* M = phi_inv(1 - alpha/2) + phi_inv(1 - beta) */
int lp_multiplier(double alpha, double beta, double* out);

/* --- analytic power ------------------------------------------------------ */

/* Phi(-c* + ncp) + Phi(-c* - ncp), ncp >= 0. */
int lp_power_from_ncp(double ncp, double alpha, double* out);

/* Noncentrality bounds at effect size kappa, first-stage effect pi, sample
 * size n. r2_dw / r2_yw in [0,1) apply covariate adjustment (pass 0 for
 * none). *upper is +infinity when the conservative denominator degenerates.
 * *ordered is the middle bound valid under ordered stratum means. */
int lp_ncp_bounds(double kappa, double pi, double n, double p_z, int mode,
                  double r2_dw, double r2_yw, double* lower, double* upper,
                  double* ordered);

typedef struct {
  double lower;
  double upper;
  double ordered_lower; /* meaningful when has_ordered != 0 */
  int has_ordered;
} lp_power_bounds;

int lp_late_power_bounds(double kappa, double pi, double n, double p_z,
                         int mode, int ordered, double r2_dw, double r2_yw,
                         double alpha, lp_power_bounds* out);

/* Minimum detectable effect sizes at power 1 - beta (beta < 0.5).
 * kappa_high / kappa_star come back as +infinity when unattainable at this
 * sample size (status stays LP_OK). */
typedef struct {
  double kappa_low;
  double kappa_high;
  double kappa_star;
} lp_mdes_result;

int lp_mdes(double pi, double n, double p_z, int mode, double alpha,
            double beta, lp_mdes_result* out);

/* Required sample sizes (reals; round for presentation). */
typedef struct {
  double n_low;
  double n_high;
  double n_star;
} lp_n_result;

int lp_required_n(double kappa, double pi, double p_z, int mode, double alpha,
                  double beta, lp_n_result* out);

/* Naive benchmark: ATE power with the estimator variance divided by pi^2. */
int lp_scaled_ate_power(double kappa, double pi, double n, double p_z,
                        double alpha, double* out);

/* --- strata superpopulations --------------------------------------------- */

typedef struct lp_spec lp_spec;

typedef struct {
  double mu_c0, sd_c0, sd_c1; /* complier control mean, control/treated sds */
  double tau;                 /* complier treated mean = mu_c0 + tau */
  double mu_nt, sd_nt;        /* never-takers (control arm only) */
  double mu_at, sd_at;        /* always-takers (treated arm only) */
  double p_c, p_nt, p_at;     /* proportions, sum to 1 */
  double p_z;                 /* assignment probability */
} lp_strata_params;

typedef struct {
  int64_t n;
  int64_t reps;
  double alpha;
  uint64_t seed;
} lp_sim_config;

lp_spec* lp_spec_create(const lp_strata_params* params);
/* Parses a strata JSON object, optionally wrapped as {"strata":..,"config":..}. */
lp_spec* lp_spec_parse(const char* json_text);
void lp_spec_free(lp_spec* spec);

int lp_spec_params(const lp_spec* spec, lp_strata_params* out);
/* *has_config = 0 when the document carried no config block. */
int lp_spec_config(const lp_spec* spec, lp_sim_config* out, int* has_config);
char* lp_spec_to_json(const lp_spec* spec);

/* Standardized effect size implied by the spec's mixture moments. */
int lp_spec_kappa(const lp_spec* spec, double* out);
/* Solve tau such that the spec's effect size equals kappa (bisection). */
int lp_spec_tau_for_kappa(const lp_spec* spec, double kappa, double* tau);
int lp_spec_ordered_means(const lp_spec* spec, double* ybar_nt, double* ybar_c,
                          double* ybar_at, int* satisfied);

/* --- simulation ----------------------------------------------------------- */

typedef struct {
  double power_late;
  double power_itt;
  double mcse_late;
  double mcse_itt;
  int64_t redraws;
  int high_redraw_rate; /* more than 1% of replications redrawn */
} lp_sim_result;

/* Deterministic in (spec, config): bit-identical output for any thread
 * count. threads = 0 selects the hardware concurrency. */
int lp_simulate(const lp_spec* spec, const lp_sim_config* cfg, int threads,
                lp_sim_result* out);

typedef struct {
  double kappa, tau, sim_power, mcse;
  double lower, ordered_lower, upper;
  int contained;     /* sim in [lower - 3 mcse, upper + 3 mcse] */
  int above_ordered; /* sim >= ordered_lower - 3 mcse */
} lp_validate_point;

/* out_points must hold n_points entries. cfg->n is the per-replication
 * sample size; tau is solved per grid point from the spec template. */
int lp_validate_bounds(const lp_spec* spec, const double* kappa_grid,
                       int64_t n_points, const lp_sim_config* cfg, int mode,
                       int threads, lp_validate_point* out_points);
/* Same run rendered as CSV with columns
 * kappa,tau,sim_power,mcse,lower,ordered_lower,upper,contained,above_ordered */
char* lp_validate_bounds_csv(const lp_spec* spec, const double* kappa_grid,
                             int64_t n_points, const lp_sim_config* cfg,
                             int mode, int threads);

/* --- estimators on raw data ----------------------------------------------- */

/* *degenerate is set (with LP_OK) when the sample cannot be used: an
 * assignment arm with fewer than two units or zero first-stage covariance. */
int lp_wald_iv(const double* z, const double* d, const double* y, int64_t n,
               double alpha, double* tau_hat, double* var_hat, double* zstat,
               int* reject, int* degenerate);
int lp_itt(const double* z, const double* y, int64_t n, double alpha,
           double* gamma_hat, double* var_hat, double* zstat, int* reject,
           int* degenerate);

/* --- observed-table diagnostic -------------------------------------------- */

typedef struct {
  double p_c, p_nt, p_at;       /* stratum shares under no-defiers accounting */
  double ybar_c;
  double ybar_nt, ybar_at;      /* NaN when the stratum is absent */
  int has_nt, has_at;
  int ordered_satisfied;
} lp_table_diag;

/* counts/means are the four (Z,D) cells in order z0d0, z0d1, z1d0, z1d1. */
int lp_stratum_means_from_table(const int64_t counts[4], const double means[4],
                                lp_table_diag* out);

/* --- residual covariance diagnostic --------------------------------------- */

int lp_covariance_diagnostics(const lp_spec* spec, int64_t n, uint64_t seed,
                              double* cov_zeta_nu, double* var_zeta,
                              double* var_nu, double* se_cov,
                              int* cauchy_schwarz_ok);

/* --- benchmark tables ------------------------------------------------------ */

/* which in {"1","2","B1","B2","B3","B4"}; reps/seed drive the simulated
 * tables and are ignored for the analytic ones. */
char* lp_table_csv(const char* which, int64_t reps, uint64_t seed, int threads);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LATEPOWER_H */
