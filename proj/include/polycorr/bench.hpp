#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "polycorr/correlator.hpp"
#include "polycorr/mc.hpp"

namespace polycorr {

// One benchmark case: E[prod_j Y(s_j)^n] over m+1 dates for the reference
// Ornstein-Uhlenbeck workload. Timings are wall-clock seconds around the
// evaluation call only.
struct BenchRow {
  int m{0};
  int n{0};
  double dense_s{0.0};
  double sparse_s{0.0};
  double iter_dense_s{0.0};
  double iter_sparse_s{0.0};
  double mc_avg_s{0.0};       // total MC wall time / repetitions
  double formula_value{0.0};
  double mc_worst{0.0};       // repetition estimate with the largest relative error
  int mc_fails{0};
};

struct BenchConfig {
  std::vector<int> ms{0, 1, 2};
  std::vector<int> ns{1, 2, 3};
  int n_paths{10000};
  int reps{100};
  double tol{1e-3};
  std::uint64_t seed{20260821};
  int timing_samples{5};  // per path, median reported
};

// Workload: b0 = 0.75, b1 = -5, sigma0 = 0.01, y = 0.15, t = 0,
// s_j = 1 + 0.5 j. Every evaluation runs cold (no shared exponential cache).
std::vector<BenchRow> run_bench(const BenchConfig& cfg);

extern const char* const kBenchCsvHeader;

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace polycorr
