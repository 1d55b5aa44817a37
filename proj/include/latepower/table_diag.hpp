#pragma once

#include <cstdint>

namespace latepower {

struct ObservedCell {
  std::int64_t count = 0;
  double mean = 0.0;  // ignored when count == 0
};

// Observed results cross-tabulated by assignment (Z) and uptake (D).
struct ObservedTable {
  ObservedCell z0_d0;
  ObservedCell z0_d1;
  ObservedCell z1_d0;
  ObservedCell z1_d1;
};

struct StratumMeansDiag {
  double p_c = 0.0;
  double p_nt = 0.0;
  double p_at = 0.0;
  double ybar_c = 0.0;
  double ybar_nt = 0.0;   // NaN when the stratum is absent
  double ybar_at = 0.0;   // NaN when the stratum is absent
  bool has_nt = false;
  bool has_at = false;
  bool ordered_satisfied = false;
};

// No-defiers accounting on a 2x2 observed table: always-taker share from the
// Z=0 margin, never-taker share from the Z=1 margin, mixed-cell means
// decomposed by moment subtraction, and the complier mean mixed across arms
// by expected complier counts. Throws infeasible_error when the implied
// stratum counts are negative, std::invalid_argument on malformed counts.
StratumMeansDiag stratum_means_from_table(const ObservedTable& t);

}  // namespace latepower
