#include "latepower/tables.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "latepower/power.hpp"

namespace latepower::tables {

namespace {

StrataSpec with(StrataSpec s, double StrataSpec::* field, double value) {
  s.*field = value;
  return s;
}

void append_row_csv(std::string& out, const StrataSpec& s, std::int64_t n,
                    const SimResult& r, bool itt, const double* implied) {
  char line[512];
  std::snprintf(line, sizeof(line),
                "%lld,%g,%g,%g,%g,%g,%g,%g,%g,%g,%g,%g,%.4f,%.4f",
                static_cast<long long>(n), s.tau, s.p_c, s.p_nt, s.p_at, s.mu_c0,
                s.sd_c0, s.sd_c1, s.mu_nt, s.sd_nt, s.mu_at, s.sd_at,
                r.power_late, r.mcse_late);
  out += line;
  if (itt) {
    std::snprintf(line, sizeof(line), ",%.4f,%.4f", r.power_itt, r.mcse_itt);
    out += line;
  }
  if (implied) {
    std::snprintf(line, sizeof(line), ",%.4f", *implied);
    out += line;
  }
  out += '\n';
}

}  // namespace

StrataSpec benchmark_base_spec() {
  StrataSpec s;
  s.mu_c0 = 0.0;
  s.sd_c0 = 8.0;
  s.sd_c1 = 8.0;
  s.tau = 5.0;
  s.mu_nt = -3.0;
  s.sd_nt = 12.0;
  s.mu_at = 3.0;
  s.sd_at = 4.0;
  s.p_c = 0.2;
  s.p_nt = 0.4;
  s.p_at = 0.4;
  s.p_z = 0.5;
  return s;
}

StrataSpec bounds_validation_spec(int index) {
  static constexpr double kMeans[5][2] = {
      {-20.0, 20.0}, {-10.0, 10.0}, {-3.0, 3.0}, {10.0, -10.0}, {20.0, -20.0}};
  if (index < 0 || index >= 5) {
    throw std::invalid_argument("bounds_validation_spec: index must be in [0, 5)");
  }
  StrataSpec s;
  s.mu_c0 = 0.0;
  s.sd_c0 = 8.0;
  s.sd_c1 = 8.0;
  s.tau = 0.0;  // callers pick tau (usually via tau_for_kappa)
  s.mu_nt = kMeans[index][0];
  s.sd_nt = 12.0;
  s.mu_at = kMeans[index][1];
  s.sd_at = 4.0;
  s.p_c = 0.5;
  s.p_nt = 0.25;
  s.p_at = 0.25;
  s.p_z = 0.5;
  return s;
}

StrataSpec selection_heterogeneity_spec() {
  StrataSpec s;
  s.mu_c0 = 0.0;
  s.sd_c0 = 3.0;
  s.sd_c1 = 3.0;
  s.tau = 5.0;
  s.mu_nt = 10.0;
  s.sd_nt = 3.0;
  s.mu_at = -5.0;
  s.sd_at = 3.0;
  s.p_c = 0.3;
  s.p_nt = 0.35;
  s.p_at = 0.35;
  s.p_z = 0.5;
  return s;
}

std::vector<SampleSizeRow> sample_size_table(double pi) {
  const AssumptionSet general{AssignmentMode::kGeneral, false};
  const ErrorSpec err{0.05, 0.2};
  std::vector<SampleSizeRow> rows;
  for (int i = 1; i <= 10; ++i) {
    const double kappa = 0.05 * i;
    const SampleSizeResult n = required_n(kappa, pi, 0.67, general, err);
    rows.push_back({kappa, n.n_high, n.n_star});
  }
  return rows;
}

std::vector<SimTableRow> sim_table_rows(const std::string& which) {
  const StrataSpec base = benchmark_base_spec();
  std::vector<SimTableRow> rows;

  if (which == "B1") {
    for (std::int64_t n : {1000, 2000, 4000}) rows.push_back({base, n});
    for (double tau : {5.0, 6.0, 7.0}) {
      rows.push_back({with(base, &StrataSpec::tau, tau), 1000});
    }
    return rows;
  }
  if (which == "B2") {
    for (double mu : {0.0, 10.0, 20.0}) {
      rows.push_back({with(base, &StrataSpec::mu_c0, mu), 1000});
    }
    StrataSpec wide = base;
    wide.p_c = 0.3;
    wide.p_nt = 0.35;
    wide.p_at = 0.35;
    constexpr double kComplierSds[3][2] = {{8, 8}, {8, 16}, {16, 16}};
    for (const auto& sd : kComplierSds) {
      StrataSpec s = wide;
      s.sd_c0 = sd[0];
      s.sd_c1 = sd[1];
      rows.push_back({s, 1000});
    }
    constexpr double kStratumMeans[3][2] = {{-3, 3}, {10, 3}, {10, -6}};
    for (const auto& mu : kStratumMeans) {
      StrataSpec s = base;
      s.mu_nt = mu[0];
      s.mu_at = mu[1];
      rows.push_back({s, 1000});
    }
    constexpr double kStratumSds[3][2] = {{12, 4}, {12, 8}, {24, 8}};
    for (const auto& sd : kStratumSds) {
      StrataSpec s = base;
      s.sd_nt = sd[0];
      s.sd_at = sd[1];
      rows.push_back({s, 1000});
    }
    constexpr double kProportions[4][3] = {
        {0.3, 0.35, 0.35}, {0.2, 0.4, 0.4}, {0.2, 0.1, 0.7}, {0.2, 0.8, 0.0}};
    for (const auto& p : kProportions) {
      StrataSpec s = base;
      s.p_c = p[0];
      s.p_nt = p[1];
      s.p_at = p[2];
      rows.push_back({s, 1000});
    }
    return rows;
  }
  if (which == "B3") {
    constexpr double kStratumMeans[5][2] = {
        {-10, 10}, {-10, 3}, {-3, 3}, {10, 3}, {10, -6}};
    for (const auto& mu : kStratumMeans) {
      StrataSpec s = base;
      s.mu_nt = mu[0];
      s.mu_at = mu[1];
      rows.push_back({s, 1000});
    }
    return rows;
  }
  if (which == "B4") {
    constexpr double kVariants[5][4] = {{0, 5, 8, 8},
                                        {-10, 15, 8, 8},
                                        {0, 5, 16, 16},
                                        {-10, 15, 16, 16},
                                        {15, -10, 16, 16}};
    for (const auto& v : kVariants) {
      StrataSpec s = base;
      s.mu_nt = v[0];
      s.mu_at = v[1];
      s.sd_nt = v[2];
      s.sd_at = v[3];
      rows.push_back({s, 2500});
    }
    return rows;
  }
  throw std::invalid_argument("unknown simulated table: " + which);
}

std::string table_csv(const std::string& which, std::int64_t reps,
                      std::uint64_t seed, int threads) {
  if (which == "1" || which == "2") {
    const double pi = which == "1" ? 0.63 : 0.4;
    std::string out = "kappa,n_conservative,n_alternative\n";
    char line[128];
    for (const SampleSizeRow& r : sample_size_table(pi)) {
      std::snprintf(line, sizeof(line), "%.2f,%.0f,%.0f\n", r.kappa,
                    std::nearbyint(r.n_conservative),
                    std::nearbyint(r.n_alternative));
      out += line;
    }
    return out;
  }

  const bool itt = which == "B3";
  const bool implied = which == "B4";
  std::string out =
      "n,tau,p_c,p_nt,p_at,mu_c0,sd_c0,sd_c1,mu_nt,sd_nt,mu_at,sd_at,"
      "power_late,mcse_late";
  if (itt) out += ",power_itt,mcse_itt";
  if (implied) out += ",implied_scaled_ate";
  out += '\n';

  const ErrorSpec err{0.05, 0.2};
  const auto rows = sim_table_rows(which);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    SimConfig cfg;
    cfg.n = row.n;
    cfg.reps = reps;
    cfg.alpha = 0.05;
    cfg.seed = seed + 0x9E3779B97F4A7C15ull * (i + 1);
    const SimResult r = simulate_power(row.spec, cfg, threads);
    double implied_power = 0.0;
    if (implied) {
      // The naive analysis sees only the complier parameters: tau over the
      // complier sd, scaled by the compliance rate.
      implied_power = scaled_ate_power(row.spec.tau / row.spec.sd_c0, row.spec.p_c,
                                       static_cast<double>(row.n), row.spec.p_z, err);
    }
    append_row_csv(out, row.spec, row.n, r, itt, implied ? &implied_power : nullptr);
  }
  return out;
}

}  // namespace latepower::tables
