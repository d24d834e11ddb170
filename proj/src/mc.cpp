#include "polycorr/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polycorr {

OUParams ou_params_from_model(const PolyModel& model, double y0) {
  if (model.sigma1 != 0.0 || model.sigma2 != 0.0)
    throw std::invalid_argument("ou: model has state-dependent diffusion");
  if (model.has_jumps()) throw std::invalid_argument("ou: model has jumps");
  if (model.sigma0 < 0.0) throw std::invalid_argument("ou: sigma0 must be >= 0");
  return OUParams{model.b0, model.b1, model.sigma0, y0};
}

PolyModel ou_to_model(const OUParams& p) {
  PolyModel model;
  model.b0 = p.b0;
  model.b1 = p.b1;
  model.sigma0 = p.sigma0;
  return model;
}

std::pair<double, double> ou_step_moments(const OUParams& p, double y_prev, double dt) {
  if (dt < 0.0) throw std::invalid_argument("ou: dt must be >= 0");
  if (p.b1 == 0.0) return {y_prev + p.b0 * dt, p.sigma0 * dt};
  const double growth = std::expm1(p.b1 * dt);
  const double mean = y_prev * (1.0 + growth) + p.b0 * growth / p.b1;
  const double var = p.sigma0 * std::expm1(2.0 * p.b1 * dt) / (2.0 * p.b1);
  return {mean, var};
}

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t x = base + (stream + 1) * 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

GaussianRng::GaussianRng(std::uint64_t seed) : eng_(seed) {}

double GaussianRng::uniform() { return (eng_() >> 11) * 0x1.0p-53; }

double GaussianRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::vector<double> simulate_ou_path(const OUParams& p, const TimeGrid& grid,
                                     std::uint64_t seed) {
  validate_grid(grid);
  GaussianRng rng(seed);
  std::vector<double> path;
  path.reserve(grid.s.size());
  double y = p.y0;
  double prev = grid.t;
  for (double s : grid.s) {
    const auto [mean, var] = ou_step_moments(p, y, s - prev);
    y = mean + std::sqrt(var) * rng.normal();
    path.push_back(y);
    prev = s;
  }
  return path;
}

namespace {

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Sum over perfect pairings of the tagged indices, each pairing contributing
// the product of its covariances.
double wick_sum(std::vector<int>& idx, const Mat& cov) {
  if (idx.empty()) return 1.0;
  if (idx.size() % 2 != 0) return 0.0;
  const int first = idx.front();
  double total = 0.0;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    std::vector<int> rest;
    rest.reserve(idx.size() - 2);
    for (std::size_t j = 1; j < idx.size(); ++j)
      if (j != k) rest.push_back(idx[j]);
    total += cov(first, idx[k]) * wick_sum(rest, cov);
  }
  return total;
}

}  // namespace

MCResult mc_correlator(const OUParams& p, const std::vector<int>& powers, const TimeGrid& grid,
                       int n_paths, int reps, double reference, double tol, std::uint64_t seed) {
  validate_grid(grid);
  if (powers.size() != grid.s.size())
    throw std::invalid_argument("mc: powers must match the observation grid");
  for (int k : powers)
    if (k < 0) throw std::invalid_argument("mc: powers must be >= 0");
  if (n_paths < 1 || reps < 1) throw std::invalid_argument("mc: n_paths and reps must be >= 1");
  if (reference == 0.0)
    throw std::invalid_argument("mc: reference must be nonzero for relative error");
  if (!(tol > 0.0)) throw std::invalid_argument("mc: tol must be > 0");

  MCResult res;
  res.repetitions.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    GaussianRng rng(stream_seed(seed, static_cast<std::uint64_t>(r)));
    double sum = 0.0;
    for (int path = 0; path < n_paths; ++path) {
      double y = p.y0;
      double prev = grid.t;
      double prod = 1.0;
      for (std::size_t j = 0; j < grid.s.size(); ++j) {
        const auto [mean, var] = ou_step_moments(p, y, grid.s[j] - prev);
        y = mean + std::sqrt(var) * rng.normal();
        prev = grid.s[j];
        prod *= ipow(y, powers[j]);
      }
      sum += prod;
    }
    res.repetitions.push_back(sum / n_paths);
  }

  double mean = 0.0;
  for (double v : res.repetitions) mean += v;
  mean /= reps;
  res.estimate = mean;
  if (reps > 1) {
    double ss = 0.0;
    for (double v : res.repetitions) ss += (v - mean) * (v - mean);
    res.std_error = std::sqrt(ss / (reps - 1.0)) / std::sqrt(static_cast<double>(reps));
  }
  for (double v : res.repetitions) {
    const double rel = std::abs(v - reference) / std::abs(reference);
    res.worst_rel_err = std::max(res.worst_rel_err, rel);
    if (rel > tol) ++res.failures;
  }
  return res;
}

double gaussian_ou_oracle(const OUParams& p, const std::vector<int>& powers,
                          const TimeGrid& grid) {
  validate_grid(grid);
  if (powers.size() != grid.s.size())
    throw std::invalid_argument("oracle: powers must match the observation grid");
  int total = 0;
  for (int k : powers) {
    if (k < 0) throw std::invalid_argument("oracle: powers must be >= 0");
    total += k;
  }
  if (total > 12)
    throw std::invalid_argument("oracle: total power above 12 (pairing count explodes)");

  const int m = static_cast<int>(grid.s.size());
  std::vector<double> mean(static_cast<std::size_t>(m));
  std::vector<double> var(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double dt = grid.s[static_cast<std::size_t>(j)] - grid.t;
    // drift part from y_prev = 0 plus the decayed start point
    const auto [mu, v2] = ou_step_moments(p, 0.0, dt);
    mean[static_cast<std::size_t>(j)] = p.y0 * std::exp(p.b1 * dt) + mu;
    var[static_cast<std::size_t>(j)] = v2;
  }
  Mat cov(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int lo = std::min(i, j);
      cov(i, j) = var[static_cast<std::size_t>(lo)] *
                  std::exp(p.b1 * std::abs(grid.s[static_cast<std::size_t>(i)] -
                                           grid.s[static_cast<std::size_t>(j)]));
    }

  // E prod (mean_j + Z_j)^{n_j} expanded over binomials; Z central Gaussian.
  std::vector<int> pick(static_cast<std::size_t>(m), 0);
  double value = 0.0;
  while (true) {
    int central = 0;
    for (int j = 0; j < m; ++j) central += pick[static_cast<std::size_t>(j)];
    if (central % 2 == 0) {
      double weight = 1.0;
      for (int j = 0; j < m; ++j) {
        const int nj = powers[static_cast<std::size_t>(j)];
        const int kj = pick[static_cast<std::size_t>(j)];
        weight *= binomial(nj, kj) * ipow(mean[static_cast<std::size_t>(j)], nj - kj);
      }
      if (weight != 0.0) {
        std::vector<int> idx;
        idx.reserve(static_cast<std::size_t>(central));
        for (int j = 0; j < m; ++j)
          for (int c = 0; c < pick[static_cast<std::size_t>(j)]; ++c) idx.push_back(j);
        value += weight * wick_sum(idx, cov);
      }
    }
    int j = 0;
    while (j < m && pick[static_cast<std::size_t>(j)] == powers[static_cast<std::size_t>(j)]) {
      pick[static_cast<std::size_t>(j)] = 0;
      ++j;
    }
    if (j == m) break;
    ++pick[static_cast<std::size_t>(j)];
  }
  return value;
}

}  // namespace polycorr
