#include "latepower/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "latepower/errors.hpp"
#include "latepower/estimators.hpp"

namespace latepower {

namespace {

constexpr int kMaxRedrawAttempts = 1000;

void check_config(const SimConfig& cfg) {
  if (cfg.n < 4) throw std::domain_error("sim config: n must be at least 4");
  if (cfg.reps < 1) throw std::domain_error("sim config: reps must be at least 1");
  if (!(cfg.alpha > 0.0) || !(cfg.alpha < 1.0)) {
    throw std::domain_error("sim config: alpha must lie in (0, 1)");
  }
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct Tally {
  std::int64_t reject_late = 0;
  std::int64_t reject_itt = 0;
  std::int64_t redraws = 0;
};

// One replication: draw until both estimators are usable, then record the two
// rejection decisions. Depends only on (spec, n, alpha, seed, rep).
void run_replication(const StrataSpec& spec, std::int64_t n, double alpha,
                     std::uint64_t seed, std::uint64_t rep, Tally& tally,
                     std::vector<double>& z, std::vector<double>& d,
                     std::vector<double>& y) {
  for (int attempt = 0; attempt < kMaxRedrawAttempts; ++attempt) {
    auto rng = replication_rng(seed, rep, static_cast<std::uint64_t>(attempt));
    generate_sample(spec, static_cast<std::size_t>(n), rng, z, d, y);
    const auto wald = wald_iv_estimate(z, d, y, alpha);
    const auto itt = itt_estimate(z, y, alpha);
    if (!wald || !itt) {
      ++tally.redraws;
      continue;
    }
    tally.reject_late += wald->reject ? 1 : 0;
    tally.reject_itt += itt->reject ? 1 : 0;
    return;
  }
  throw infeasible_error("replication kept drawing degenerate samples");
}

}  // namespace

std::mt19937_64 replication_rng(std::uint64_t seed, std::uint64_t rep,
                                std::uint64_t attempt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(rep),
                    static_cast<std::uint32_t>(rep >> 32),
                    static_cast<std::uint32_t>(attempt)};
  return std::mt19937_64(seq);
}

void generate_sample(const StrataSpec& spec, std::size_t n, std::mt19937_64& rng,
                     std::vector<double>& z, std::vector<double>& d,
                     std::vector<double>& y) {
  z.resize(n);
  d.resize(n);
  y.resize(n);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> stdnorm(0.0, 1.0);
  const double cut_nt = spec.p_c + spec.p_nt;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = unif(rng);
    const bool zi = unif(rng) < spec.p_z;
    const double g = stdnorm(rng);
    double mu, sd;
    bool di;
    if (u < spec.p_c) {  // complier: uptake follows assignment
      di = zi;
      mu = zi ? spec.mu_c0 + spec.tau : spec.mu_c0;
      sd = zi ? spec.sd_c1 : spec.sd_c0;
    } else if (u < cut_nt) {  // never-taker
      di = false;
      mu = spec.mu_nt;
      sd = spec.sd_nt;
    } else {  // always-taker
      di = true;
      mu = spec.mu_at;
      sd = spec.sd_at;
    }
    z[i] = zi ? 1.0 : 0.0;
    d[i] = di ? 1.0 : 0.0;
    y[i] = mu + sd * g;
  }
}

SimResult simulate_power(const StrataSpec& spec, const SimConfig& cfg,
                         int threads) {
  validate(spec);
  check_config(cfg);
  const int workers =
      static_cast<int>(std::min<std::int64_t>(resolve_threads(threads), cfg.reps));

  std::vector<Tally> tallies(static_cast<std::size_t>(workers));
  auto worker = [&](int w) {
    std::vector<double> z, d, y;
    Tally& t = tallies[static_cast<std::size_t>(w)];
    for (std::int64_t rep = w; rep < cfg.reps; rep += workers) {
      run_replication(spec, cfg.n, cfg.alpha, cfg.seed,
                      static_cast<std::uint64_t>(rep), t, z, d, y);
    }
  };

  if (workers == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }

  Tally total;
  for (const Tally& t : tallies) {
    total.reject_late += t.reject_late;
    total.reject_itt += t.reject_itt;
    total.redraws += t.redraws;
  }

  SimResult out;
  const double reps = static_cast<double>(cfg.reps);
  out.power_late = static_cast<double>(total.reject_late) / reps;
  out.power_itt = static_cast<double>(total.reject_itt) / reps;
  out.mcse_late = std::sqrt(out.power_late * (1.0 - out.power_late) / reps);
  out.mcse_itt = std::sqrt(out.power_itt * (1.0 - out.power_itt) / reps);
  out.redraws = total.redraws;
  out.high_redraw_rate = static_cast<double>(total.redraws) > 0.01 * reps;
  return out;
}

std::vector<ValidatePoint> validate_bounds(const StrataSpec& base,
                                           std::span<const double> kappa_grid,
                                           const SimConfig& cfg,
                                           const ErrorSpec& err,
                                           AssignmentMode mode, int threads) {
  validate(base);
  check_config(cfg);
  std::vector<ValidatePoint> points;
  points.reserve(kappa_grid.size());

  for (std::size_t i = 0; i < kappa_grid.size(); ++i) {
    const double kappa = kappa_grid[i];
    if (!(kappa > 0.0)) throw std::domain_error("kappa grid values must be positive");

    ValidatePoint pt;
    pt.kappa = kappa;
    pt.tau = tau_for_kappa(base, kappa);

    StrataSpec spec = base;
    spec.tau = pt.tau;
    SimConfig point_cfg = cfg;
    point_cfg.seed = cfg.seed + 0x9E3779B97F4A7C15ull * (i + 1);
    const SimResult sim = simulate_power(spec, point_cfg, threads);
    pt.sim_power = sim.power_late;
    pt.mcse = sim.mcse_late;

    const DesignPoint design{kappa, spec.p_c, static_cast<double>(cfg.n), spec.p_z};
    const AssumptionSet assumptions{mode, true};
    const PowerBounds bounds = late_power_bounds(design, assumptions, err);
    pt.lower = bounds.lower;
    pt.upper = bounds.upper;
    pt.ordered_lower = *bounds.ordered_lower;
    pt.contained = pt.sim_power >= pt.lower - 3.0 * pt.mcse &&
                   pt.sim_power <= pt.upper + 3.0 * pt.mcse;
    pt.above_ordered = pt.sim_power >= pt.ordered_lower - 3.0 * pt.mcse;
    points.push_back(pt);
  }
  return points;
}

std::string validate_csv(const std::vector<ValidatePoint>& points) {
  std::string out =
      "kappa,tau,sim_power,mcse,lower,ordered_lower,upper,contained,above_ordered\n";
  char line[256];
  for (const ValidatePoint& p : points) {
    std::snprintf(line, sizeof(line),
                  "%.10g,%.10g,%.6f,%.6f,%.6f,%.6f,%.6f,%d,%d\n", p.kappa, p.tau,
                  p.sim_power, p.mcse, p.lower, p.ordered_lower, p.upper,
                  p.contained ? 1 : 0, p.above_ordered ? 1 : 0);
    out += line;
  }
  return out;
}

CovarianceDiagnostics covariance_diagnostics(const StrataSpec& spec,
                                             const SimConfig& cfg) {
  validate(spec);
  check_config(cfg);
  std::vector<double> z, d, y;
  auto rng = replication_rng(cfg.seed, 0, 0);
  generate_sample(spec, static_cast<std::size_t>(cfg.n), rng, z, d, y);

  const std::size_t n = z.size();
  double zb = 0.0, db = 0.0, yb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    zb += z[i];
    db += d[i];
    yb += y[i];
  }
  zb /= static_cast<double>(n);
  db /= static_cast<double>(n);
  yb /= static_cast<double>(n);

  double szz = 0.0, szd = 0.0, szy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double zc = z[i] - zb;
    szz += zc * zc;
    szd += zc * (d[i] - db);
    szy += zc * (y[i] - yb);
  }
  if (szz == 0.0) throw infeasible_error("sample has a single assignment arm");
  const double gamma = szy / szz;
  const double pi_hat = szd / szz;

  double cov = 0.0, vz = 0.0, vn = 0.0, cov2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double zc = z[i] - zb;
    const double zeta = y[i] - yb - gamma * zc;
    const double nu = d[i] - db - pi_hat * zc;
    cov += zeta * nu;
    vz += zeta * zeta;
    vn += nu * nu;
    cov2 += zeta * nu * zeta * nu;
  }
  const double dn = static_cast<double>(n);
  CovarianceDiagnostics out;
  out.cov_zeta_nu = cov / dn;
  out.var_zeta = vz / dn;
  out.var_nu = vn / dn;
  out.se_cov =
      std::sqrt(std::max(0.0, cov2 / dn - out.cov_zeta_nu * out.cov_zeta_nu) / dn);
  out.cauchy_schwarz_ok = std::fabs(out.cov_zeta_nu) <=
                          std::sqrt(out.var_zeta * out.var_nu) * (1.0 + 1e-12);
  return out;
}

}  // namespace latepower
