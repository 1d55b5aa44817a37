// latepower command-line front end. All computation goes through the C API in
// latepower.h; this file only parses arguments and formats results.
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "latepower.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitArgs = 2;

int threads_from_env() {
  const char* env = std::getenv("LATE_POWER_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  return std::atoi(env);  // 0 = auto
}

[[noreturn]] void die(int code, const std::string& msg) {
  std::cerr << "latepower: " << msg << "\n";
  std::exit(code);
}

int exit_code_for(int status) {
  switch (status) {
    case LP_ERR_DOMAIN:
    case LP_ERR_PARSE:
      return kExitArgs;
    default:
      return kExitInfeasible;
  }
}

void check(int status) {
  if (status != LP_OK) die(exit_code_for(status), lp_last_error());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(kExitArgs, "cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string owned(char* s, int fallback_code = kExitInfeasible) {
  if (s == nullptr) die(exit_code_for(fallback_code), lp_last_error());
  std::string out(s);
  lp_string_free(s);
  return out;
}

// JSON number or null for +/-infinity (kept out of JSON proper).
json finite_or_null(double x) {
  if (std::isinf(x) || std::isnan(x)) return nullptr;
  return x;
}

void emit(const json& j, const std::string& format,
          const std::vector<std::pair<std::string, std::string>>& text_lines) {
  if (format == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  if (format == "csv") {
    // One header/value row over the scalar fields, in key order.
    std::string header, row;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_object() || it.value().is_array()) continue;
      if (!header.empty()) {
        header += ',';
        row += ',';
      }
      header += it.key();
      row += it.value().is_null() ? "unattainable" : it.value().dump();
    }
    std::cout << header << "\n" << row << "\n";
    return;
  }
  for (const auto& [k, v] : text_lines) std::cout << k << ": " << v << "\n";
}

std::string fmt(double x, const char* spec = "%.6f") {
  if (std::isinf(x)) return "unattainable";
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, x);
  return buf;
}

int mode_from_flags(const std::string& mode, double pz) {
  if (mode == "equal") return LP_MODE_EQUAL;
  if (mode == "general") return LP_MODE_GENERAL;
  return pz == 0.5 ? LP_MODE_EQUAL : LP_MODE_GENERAL;
}

std::vector<double> parse_grid(const std::string& text) {
  double a = 0, b = 0, step = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || step <= 0) {
    die(kExitArgs, "kappa grid must be a:b:step with step > 0, got " + text);
  }
  std::vector<double> grid;
  for (double k = a; k <= b + 1e-12; k += step) grid.push_back(k);
  if (grid.empty()) die(kExitArgs, "kappa grid is empty");
  return grid;
}

struct CommonFormat {
  std::string format = "text";
};

void add_format(CLI::App* cmd, CommonFormat& f, const char* def = "text") {
  f.format = def;
  cmd->add_option("--format", f.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
}

// --- subcommand runners -----------------------------------------------------

int run_power(double kappa, double pi, double n, double pz, double alpha,
              bool ordered, double r2dw, double r2yw, const std::string& mode,
              const std::string& format) {
  lp_power_bounds out{};
  check(lp_late_power_bounds(kappa, pi, n, pz, mode_from_flags(mode, pz),
                             ordered ? 1 : 0, r2dw, r2yw, alpha, &out));
  json j;
  j["kappa"] = kappa;
  j["pi"] = pi;
  j["n"] = n;
  j["p_z"] = pz;
  j["alpha"] = alpha;
  j["lower"] = out.lower;
  j["upper"] = out.upper;
  if (out.has_ordered) j["ordered_lower"] = out.ordered_lower;
  std::vector<std::pair<std::string, std::string>> lines = {
      {"lower", fmt(out.lower)}, {"upper", fmt(out.upper)}};
  if (out.has_ordered) {
    lines.insert(lines.begin() + 1, {"ordered_lower", fmt(out.ordered_lower)});
  }
  emit(j, format, lines);
  return kExitOk;
}

int run_mdes(double pi, double n, double pz, double alpha, double beta,
             const std::string& mode, const std::string& format) {
  lp_mdes_result out{};
  check(lp_mdes(pi, n, pz, mode_from_flags(mode, pz), alpha, beta, &out));
  json j;
  j["pi"] = pi;
  j["n"] = n;
  j["p_z"] = pz;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["kappa_low"] = out.kappa_low;
  j["kappa_high"] = finite_or_null(out.kappa_high);
  j["kappa_star"] = finite_or_null(out.kappa_star);
  emit(j, format,
       {{"kappa_low", fmt(out.kappa_low)},
        {"kappa_high (conservative)", fmt(out.kappa_high)},
        {"kappa_star (ordered means)", fmt(out.kappa_star)}});
  if (std::isinf(out.kappa_high) || std::isinf(out.kappa_star)) {
    std::cerr << "latepower: MDES unattainable at this sample size\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int run_n(double kappa, double pi, double pz, double alpha, double beta,
          const std::string& round_mode, const std::string& mode,
          const std::string& format) {
  lp_n_result out{};
  check(lp_required_n(kappa, pi, pz, mode_from_flags(mode, pz), alpha, beta, &out));
  auto present = [&](double x) {
    return round_mode == "nearest" ? std::nearbyint(x) : std::ceil(x);
  };
  json j;
  j["kappa"] = kappa;
  j["pi"] = pi;
  j["p_z"] = pz;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["round"] = round_mode;
  j["n_low"] = present(out.n_low);
  j["n_high"] = present(out.n_high);
  j["n_star"] = present(out.n_star);
  j["n_low_exact"] = out.n_low;
  j["n_high_exact"] = out.n_high;
  j["n_star_exact"] = out.n_star;
  emit(j, format,
       {{"n_low", fmt(present(out.n_low), "%.0f")},
        {"n_high (conservative)", fmt(present(out.n_high), "%.0f")},
        {"n_star (ordered means)", fmt(present(out.n_star), "%.0f")}});
  return kExitOk;
}

int run_simulate(const std::string& spec_path, std::optional<std::int64_t> n,
                 std::optional<std::int64_t> reps, std::optional<double> alpha,
                 std::optional<std::uint64_t> seed, const std::string& format) {
  lp_spec* spec = lp_spec_parse(read_file(spec_path).c_str());
  if (spec == nullptr) die(exit_code_for(LP_ERR_PARSE), lp_last_error());

  lp_sim_config cfg{0, 5000, 0.05, 1};
  int has_config = 0;
  check(lp_spec_config(spec, &cfg, &has_config));
  if (!has_config) cfg = {0, 5000, 0.05, 1};
  if (n) cfg.n = *n;
  if (reps) cfg.reps = *reps;
  if (alpha) cfg.alpha = *alpha;
  if (seed) cfg.seed = *seed;
  if (cfg.n <= 0) {
    lp_spec_free(spec);
    die(kExitArgs, "sample size missing: pass --n or a config block in the spec file");
  }

  lp_sim_result out{};
  const int status = lp_simulate(spec, &cfg, threads_from_env(), &out);
  lp_spec_free(spec);
  check(status);

  json j;
  j["n"] = cfg.n;
  j["reps"] = cfg.reps;
  j["alpha"] = cfg.alpha;
  j["seed"] = cfg.seed;
  j["power_late"] = out.power_late;
  j["power_itt"] = out.power_itt;
  j["mcse_late"] = out.mcse_late;
  j["mcse_itt"] = out.mcse_itt;
  j["redraws"] = out.redraws;
  j["high_redraw_rate"] = out.high_redraw_rate != 0;
  emit(j, format,
       {{"power_late", fmt(out.power_late, "%.4f")},
        {"power_itt", fmt(out.power_itt, "%.4f")},
        {"mcse_late", fmt(out.mcse_late, "%.4f")},
        {"mcse_itt", fmt(out.mcse_itt, "%.4f")},
        {"redraws", std::to_string(out.redraws)}});
  if (out.high_redraw_rate) {
    std::cerr << "latepower: warning: more than 1% of replications were redrawn\n";
  }
  return kExitOk;
}

int run_validate(const std::string& spec_path, const std::string& grid_text,
                 std::optional<std::int64_t> n, std::int64_t reps,
                 double alpha, std::uint64_t seed, const std::string& mode,
                 const std::string& format) {
  lp_spec* spec = lp_spec_parse(read_file(spec_path).c_str());
  if (spec == nullptr) die(exit_code_for(LP_ERR_PARSE), lp_last_error());

  lp_strata_params params{};
  check(lp_spec_params(spec, &params));
  lp_sim_config cfg{0, reps, alpha, seed};
  int has_config = 0;
  lp_sim_config file_cfg{};
  check(lp_spec_config(spec, &file_cfg, &has_config));
  cfg.n = n ? *n : (has_config ? file_cfg.n : 0);
  if (cfg.n <= 0) {
    lp_spec_free(spec);
    die(kExitArgs, "sample size missing: pass --n or a config block in the spec file");
  }

  const std::vector<double> grid = parse_grid(grid_text);
  const int m = mode_from_flags(mode, params.p_z);
  if (format == "json") {
    std::vector<lp_validate_point> points(grid.size());
    const int status =
        lp_validate_bounds(spec, grid.data(), static_cast<int64_t>(grid.size()),
                           &cfg, m, threads_from_env(), points.data());
    lp_spec_free(spec);
    check(status);
    json rows = json::array();
    for (const auto& p : points) {
      json r;
      r["kappa"] = p.kappa;
      r["tau"] = p.tau;
      r["sim_power"] = p.sim_power;
      r["mcse"] = p.mcse;
      r["lower"] = p.lower;
      r["ordered_lower"] = p.ordered_lower;
      r["upper"] = p.upper;
      r["contained"] = p.contained != 0;
      r["above_ordered"] = p.above_ordered != 0;
      rows.push_back(r);
    }
    std::cout << rows.dump(2) << "\n";
    return kExitOk;
  }
  char* csv = lp_validate_bounds_csv(spec, grid.data(),
                                     static_cast<int64_t>(grid.size()), &cfg, m,
                                     threads_from_env());
  lp_spec_free(spec);
  std::cout << owned(csv);
  return kExitOk;
}

int run_tables(const std::string& which, std::int64_t reps, std::uint64_t seed,
               const std::string& format) {
  const std::string csv =
      owned(lp_table_csv(which.c_str(), reps, seed, threads_from_env()));
  if (format != "json") {
    std::cout << csv;
    return kExitOk;
  }
  // Re-shape the CSV into an array of objects keyed by the header row.
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> headers;
  {
    std::istringstream h(line);
    std::string cell;
    while (std::getline(h, cell, ',')) headers.push_back(cell);
  }
  json rows = json::array();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream r(line);
    std::string cell;
    json row;
    for (const std::string& key : headers) {
      std::getline(r, cell, ',');
      row[key] = std::stod(cell);
    }
    rows.push_back(row);
  }
  std::cout << rows.dump(2) << "\n";
  return kExitOk;
}

int run_diagnose(const std::string& table_path, const std::string& format) {
  json doc;
  try {
    doc = json::parse(read_file(table_path));
  } catch (const json::exception& e) {
    die(kExitArgs, std::string("table file: ") + e.what());
  }
  int64_t counts[4] = {0, 0, 0, 0};
  double means[4] = {0, 0, 0, 0};
  const char* cells[4] = {"z0_d0", "z0_d1", "z1_d0", "z1_d1"};
  for (int i = 0; i < 4; ++i) {
    if (!doc.contains(cells[i])) {
      die(kExitArgs, std::string("table file: missing cell ") + cells[i]);
    }
    const auto& c = doc.at(cells[i]);
    counts[i] = c.value("count", int64_t{0});
    means[i] = c.value("mean", 0.0);
  }
  lp_table_diag out{};
  check(lp_stratum_means_from_table(counts, means, &out));
  json j;
  j["p_c"] = out.p_c;
  j["p_nt"] = out.p_nt;
  j["p_at"] = out.p_at;
  j["ybar_c"] = out.ybar_c;
  j["ybar_nt"] = out.has_nt ? json(out.ybar_nt) : json(nullptr);
  j["ybar_at"] = out.has_at ? json(out.ybar_at) : json(nullptr);
  j["ordered_satisfied"] = out.ordered_satisfied != 0;
  emit(j, format,
       {{"complier share", fmt(out.p_c, "%.4f")},
        {"never-taker share", fmt(out.p_nt, "%.4f")},
        {"always-taker share", fmt(out.p_at, "%.4f")},
        {"complier mean", fmt(out.ybar_c, "%.4f")},
        {"never-taker mean", out.has_nt ? fmt(out.ybar_nt, "%.4f") : "absent"},
        {"always-taker mean", out.has_at ? fmt(out.ybar_at, "%.4f") : "absent"},
        {"ordered means", out.ordered_satisfied ? "satisfied" : "violated"}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Power bounds, MDES and sample sizes for the Wald IV estimator "
               "of a local average treatment effect, with a principal-strata "
               "Monte-Carlo validator"};
  app.require_subcommand(1);

  // power
  auto* power = app.add_subcommand("power", "power bounds at a design point");
  double kappa = 0, pi = 0, n = 0, pz = 0.5, alpha = 0.05, beta = 0.2;
  double r2dw = 0, r2yw = 0;
  bool ordered = false;
  std::string mode = "auto";
  CommonFormat pf;
  power->add_option("--kappa", kappa, "standardized effect size")->required();
  power->add_option("--pi", pi, "first-stage effect (compliance rate)")->required();
  power->add_option("--n", n, "sample size")->required();
  power->add_option("--pz", pz, "assignment probability", true);
  power->add_option("--alpha", alpha, "type-I error tolerance", true);
  power->add_flag("--ordered", ordered, "also report the ordered-means lower bound");
  power->add_option("--r2dw", r2dw, "covariate R^2 on uptake", true);
  power->add_option("--r2yw", r2yw, "covariate R^2 on outcome", true);
  power->add_option("--mode", mode, "equal|general|auto", true)
      ->check(CLI::IsMember({"auto", "equal", "general"}));
  add_format(power, pf);

  // mdes
  auto* mdes_cmd = app.add_subcommand("mdes", "minimum detectable effect size");
  double m_pi = 0, m_n = 0, m_pz = 0.5, m_alpha = 0.05, m_beta = 0.2;
  std::string m_mode = "auto";
  CommonFormat mf;
  mdes_cmd->add_option("--pi", m_pi)->required();
  mdes_cmd->add_option("--n", m_n)->required();
  mdes_cmd->add_option("--pz", m_pz, "", true);
  mdes_cmd->add_option("--alpha", m_alpha, "", true);
  mdes_cmd->add_option("--beta", m_beta, "type-II error tolerance", true);
  mdes_cmd->add_option("--mode", m_mode, "", true)
      ->check(CLI::IsMember({"auto", "equal", "general"}));
  add_format(mdes_cmd, mf);

  // n
  auto* n_cmd = app.add_subcommand("n", "required sample size");
  double n_kappa = 0, n_pi = 0, n_pz = 0.5, n_alpha = 0.05, n_beta = 0.2;
  std::string n_round = "ceil", n_mode = "auto";
  CommonFormat nf;
  n_cmd->add_option("--kappa", n_kappa)->required();
  n_cmd->add_option("--pi", n_pi)->required();
  n_cmd->add_option("--pz", n_pz, "", true);
  n_cmd->add_option("--alpha", n_alpha, "", true);
  n_cmd->add_option("--beta", n_beta, "", true);
  n_cmd->add_option("--round", n_round, "presentation rounding", true)
      ->check(CLI::IsMember({"ceil", "nearest"}));
  n_cmd->add_option("--mode", n_mode, "", true)
      ->check(CLI::IsMember({"auto", "equal", "general"}));
  add_format(n_cmd, nf);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "simulated power for a strata spec");
  std::string s_spec;
  std::optional<std::int64_t> s_n, s_reps;
  std::optional<double> s_alpha;
  std::optional<std::uint64_t> s_seed;
  CommonFormat sf;
  sim_cmd->add_option("--spec", s_spec, "strata spec JSON file")->required();
  sim_cmd->add_option("--n", s_n, "sample size per replication");
  sim_cmd->add_option("--reps", s_reps, "replication count");
  sim_cmd->add_option("--alpha", s_alpha, "test level");
  sim_cmd->add_option("--seed", s_seed, "rng seed");
  add_format(sim_cmd, sf);

  // validate
  auto* val_cmd = app.add_subcommand(
      "validate", "simulated power vs analytic bounds over a kappa grid");
  std::string v_spec, v_grid, v_mode = "auto";
  std::optional<std::int64_t> v_n;
  std::int64_t v_reps = 10000;
  double v_alpha = 0.05;
  std::uint64_t v_seed = 1;
  CommonFormat vf;
  val_cmd->add_option("--spec", v_spec)->required();
  val_cmd->add_option("--kappa-grid", v_grid, "a:b:step")->required();
  val_cmd->add_option("--n", v_n);
  val_cmd->add_option("--reps", v_reps, "", true);
  val_cmd->add_option("--alpha", v_alpha, "", true);
  val_cmd->add_option("--seed", v_seed, "", true);
  val_cmd->add_option("--mode", v_mode, "", true)
      ->check(CLI::IsMember({"auto", "equal", "general"}));
  add_format(val_cmd, vf, "csv");

  // tables
  auto* tab_cmd = app.add_subcommand("tables", "regenerate the benchmark tables");
  std::string t_which;
  std::int64_t t_reps = 5000;
  std::uint64_t t_seed = 1;
  CommonFormat tf;
  tab_cmd->add_option("--which", t_which, "1|2|B1|B2|B3|B4")
      ->required()
      ->check(CLI::IsMember({"1", "2", "B1", "B2", "B3", "B4"}));
  tab_cmd->add_option("--reps", t_reps, "", true);
  tab_cmd->add_option("--seed", t_seed, "", true);
  add_format(tab_cmd, tf, "csv");

  // diagnose
  auto* diag_cmd = app.add_subcommand(
      "diagnose", "stratum means and ordered-means check from an observed table");
  std::string d_table;
  CommonFormat df;
  diag_cmd->add_option("--table", d_table, "observed 2x2 table JSON file")->required();
  add_format(diag_cmd, df);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "latepower: " << e.what() << "\n";
    return kExitArgs;
  }

  if (power->parsed()) {
    return run_power(kappa, pi, n, pz, alpha, ordered, r2dw, r2yw, mode, pf.format);
  }
  if (mdes_cmd->parsed()) {
    return run_mdes(m_pi, m_n, m_pz, m_alpha, m_beta, m_mode, mf.format);
  }
  if (n_cmd->parsed()) {
    return run_n(n_kappa, n_pi, n_pz, n_alpha, n_beta, n_round, n_mode, nf.format);
  }
  if (sim_cmd->parsed()) {
    return run_simulate(s_spec, s_n, s_reps, s_alpha, s_seed, sf.format);
  }
  if (val_cmd->parsed()) {
    return run_validate(v_spec, v_grid, v_n, v_reps, v_alpha, v_seed, v_mode,
                        vf.format);
  }
  if (tab_cmd->parsed()) return run_tables(t_which, t_reps, t_seed, tf.format);
  if (diag_cmd->parsed()) return run_diagnose(d_table, df.format);
  return kExitArgs;
}
