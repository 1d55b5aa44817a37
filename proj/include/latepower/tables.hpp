#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latepower/sim.hpp"
#include "latepower/strata.hpp"

namespace latepower::tables {

// --- analytic sample-size tables ("1", "2") ---------------------------------
// Required N over kappa = 0.05..0.50 for a job-training-style design:
// p_z = 0.67, alpha = 0.05, beta = 0.2, general-assignment bounds. Table 1
// uses pi = 0.63, table 2 pi = 0.4. n columns are reals; presentation
// rounding happens in the CSV (nearest, to match the reference tables).
struct SampleSizeRow {
  double kappa = 0.0;
  double n_conservative = 0.0;  // from the power lower bound
  double n_alternative = 0.0;   // from the ordered-means lower bound
};
std::vector<SampleSizeRow> sample_size_table(double pi);

// --- simulation benchmark tables ("B1".."B4") --------------------------------
struct SimTableRow {
  StrataSpec spec;
  std::int64_t n = 0;
};
std::vector<SimTableRow> sim_table_rows(const std::string& which);

// Base three-strata spec shared by the benchmark tables: tau = 5, pi = 0.2,
// complier sds 8/8, never-takers (0.4, -3, 12), always-takers (0.4, 3, 4).
StrataSpec benchmark_base_spec();

// Five-spec suite for bounds validation: pi = 0.5, complier variances 64/64,
// never-taker variance 144, always-taker variance 16, proportions
// 0.5/0.25/0.25, and stratum means (mu_nt, mu_at) stepping from (-20, 20)
// through (20, -20). index in [0, 5).
StrataSpec bounds_validation_spec(int index);

// Selection-on-levels spec where the ITT and LATE test powers diverge:
// pi = 0.3, never-/always-takers 35% each with means 10 / -5, complier
// control mean 0, tau = 5, all sds 3.
StrataSpec selection_heterogeneity_spec();

// CSV rendering for the CLI. which in {"1","2","B1","B2","B3","B4"}; reps and
// seed drive the simulated tables (ignored for "1"/"2"). Throws
// std::invalid_argument for an unknown table name.
std::string table_csv(const std::string& which, std::int64_t reps,
                      std::uint64_t seed, int threads);

}  // namespace latepower::tables
