#include "latepower/table_diag.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "latepower/errors.hpp"

namespace latepower {

namespace {

constexpr double kVacuousStratum = 1e-9;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

StratumMeansDiag stratum_means_from_table(const ObservedTable& t) {
  for (const ObservedCell* c : {&t.z0_d0, &t.z0_d1, &t.z1_d0, &t.z1_d1}) {
    if (c->count < 0) throw std::invalid_argument("cell counts must be nonnegative");
    if (c->count > 0 && !std::isfinite(c->mean)) {
      throw std::invalid_argument("nonempty cells need a finite mean");
    }
  }
  const double n0 = static_cast<double>(t.z0_d0.count + t.z0_d1.count);
  const double n1 = static_cast<double>(t.z1_d0.count + t.z1_d1.count);
  if (n0 <= 0.0 || n1 <= 0.0) {
    throw std::invalid_argument("both assignment arms must be nonempty");
  }

  StratumMeansDiag out;
  // No-defiers accounting: uptake under Z=0 identifies always-takers, refusal
  // under Z=1 identifies never-takers.
  out.p_at = static_cast<double>(t.z0_d1.count) / n0;
  out.p_nt = static_cast<double>(t.z1_d0.count) / n1;
  out.p_c = 1.0 - out.p_at - out.p_nt;
  if (out.p_c < -1e-12) {
    std::ostringstream os;
    os << "table implies a negative complier share (" << out.p_c
       << "); inconsistent with no defiers";
    throw infeasible_error(os.str());
  }
  out.p_c = std::max(out.p_c, 0.0);
  if (out.p_c == 0.0) throw infeasible_error("table implies no compliers");

  out.has_at = out.p_at > kVacuousStratum;
  out.has_nt = out.p_nt > kVacuousStratum;
  out.ybar_at = out.has_at ? t.z0_d1.mean : kNaN;
  out.ybar_nt = out.has_nt ? t.z1_d0.mean : kNaN;

  // (Z=0, D=0) mixes compliers with never-takers; peel the expected
  // never-taker mass off the cell moment. Same for always-takers in (1,1).
  const double c0_cnt = out.p_c * n0;
  const double nt_in_00 = out.p_nt * n0;
  const double cell00 = static_cast<double>(t.z0_d0.count);
  const double c0_mean =
      (cell00 * t.z0_d0.mean - (out.has_nt ? nt_in_00 * out.ybar_nt : 0.0)) / c0_cnt;

  const double c1_cnt = out.p_c * n1;
  const double at_in_11 = out.p_at * n1;
  const double cell11 = static_cast<double>(t.z1_d1.count);
  const double c1_mean =
      (cell11 * t.z1_d1.mean - (out.has_at ? at_in_11 * out.ybar_at : 0.0)) / c1_cnt;

  out.ybar_c = (c0_cnt * c0_mean + c1_cnt * c1_mean) / (c0_cnt + c1_cnt);

  const bool nt_ok = !out.has_nt || out.ybar_nt <= out.ybar_c;
  const bool at_ok = !out.has_at || out.ybar_c <= out.ybar_at;
  out.ordered_satisfied = nt_ok && at_ok;
  return out;
}

}  // namespace latepower
