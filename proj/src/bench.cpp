#include "polycorr/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace polycorr {

namespace {

using Clock = std::chrono::steady_clock;

template <class Fn>
double time_median(int samples, Fn&& fn) {
  std::vector<double> elapsed;
  elapsed.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const auto start = Clock::now();
    fn();
    elapsed.push_back(std::chrono::duration<double>(Clock::now() - start).count());
  }
  std::sort(elapsed.begin(), elapsed.end());
  return elapsed[elapsed.size() / 2];
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  if (cfg.timing_samples < 1) throw std::invalid_argument("bench: timing_samples must be >= 1");
  const OUParams ou{0.75, -5.0, 0.01, 0.15};
  const PolyModel model = ou_to_model(ou);

  std::vector<BenchRow> rows;
  for (int m : cfg.ms) {
    if (m < 0) throw std::invalid_argument("bench: m must be >= 0");
    TimeGrid grid;
    grid.t = 0.0;
    for (int j = 0; j <= m; ++j) grid.s.push_back(1.0 + 0.5 * j);

    for (int n : cfg.ns) {
      if (n < 1) throw std::invalid_argument("bench: n must be >= 1");
      CorrelatorSpec spec;
      spec.model = model;
      spec.grid = grid;
      spec.y = ou.y0;
      Vec mono = Vec::Zero(n + 1);
      mono[n] = 1.0;
      spec.polys.assign(static_cast<std::size_t>(m) + 1, mono);

      BenchRow row;
      row.m = m;
      row.n = n;

      const EvalOptions cold;  // no shared cache, every sample recomputes
      double value = 0.0;
      row.sparse_s = time_median(cfg.timing_samples,
                                 [&] { value = correlator(spec, cold, MatOps::sparse); });
      row.formula_value = value;
      row.dense_s = time_median(cfg.timing_samples,
                                [&] { value = correlator(spec, cold, MatOps::dense); });
      row.iter_dense_s = time_median(
          cfg.timing_samples, [&] { value = correlator_iterated(spec, cold, MatOps::dense); });
      row.iter_sparse_s = time_median(
          cfg.timing_samples, [&] { value = correlator_iterated(spec, cold, MatOps::sparse); });

      const std::vector<int> powers(static_cast<std::size_t>(m) + 1, n);
      const auto mc_start = Clock::now();
      const MCResult mc = mc_correlator(ou, powers, grid, cfg.n_paths, cfg.reps,
                                        row.formula_value, cfg.tol, cfg.seed);
      const double mc_total = std::chrono::duration<double>(Clock::now() - mc_start).count();
      row.mc_avg_s = mc_total / cfg.reps;
      row.mc_fails = mc.failures;
      row.mc_worst = mc.estimate;
      double worst = -1.0;
      for (double rep : mc.repetitions) {
        const double rel = std::abs(rep - row.formula_value) / std::abs(row.formula_value);
        if (rel > worst) {
          worst = rel;
          row.mc_worst = rep;
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

const char* const kBenchCsvHeader =
    "m,n,dense_s,sparse_s,iter_dense_s,iter_sparse_s,mc_avg_s,formula_value,mc_worst,mc_fails";

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchCsvHeader << '\n';
  char buf[512];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%d", r.m, r.n,
                  r.dense_s, r.sparse_s, r.iter_dense_s, r.iter_sparse_s, r.mc_avg_s,
                  r.formula_value, r.mc_worst, r.mc_fails);
    out << buf << '\n';
  }
}

}  // namespace polycorr
