#pragma once

// Shared fixtures and independent oracles for the test suite. Everything here
// is deliberately implemented from first principles (direct polynomial
// arithmetic, explicit index bookkeeping) rather than through the library's
// own recursions, so tests compare two genuinely different computations.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "polycorr/correlator.hpp"
#include "polycorr/linalg.hpp"
#include "polycorr/model.hpp"

namespace testutil {

using polycorr::Index;
using polycorr::Mat;
using polycorr::Vec;

inline Vec monomial(int e) {
  Vec p = Vec::Zero(e + 1);
  p[e] = 1.0;
  return p;
}

inline bool exact_equal(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return a.size() == 0 || (a - b).cwiseAbs().maxCoeff() == 0.0;
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
}

// Diffusion with mean reversion and mild state-dependent variance; safely
// inside the exponential-recursion conditions for the degrees used in tests.
inline polycorr::PolyModel random_diffusion(std::mt19937_64& rng) {
  polycorr::PolyModel model;
  model.b0 = uniform(rng, 0.2, 1.0);
  model.b1 = uniform(rng, -4.0, -0.5);
  model.sigma0 = uniform(rng, 0.002, 0.05);
  model.sigma1 = uniform(rng, 0.0, 0.02);
  model.sigma2 = uniform(rng, 0.0, 0.05);
  return model;
}

// Jump variant: adds jump-moment rows ximax >= order; keeps the top (x^m)
// coefficients modest so diagonals stay well separated.
inline polycorr::PolyModel random_jump_model(std::mt19937_64& rng, int max_order) {
  polycorr::PolyModel model = random_diffusion(rng);
  for (int m = 2; m <= max_order; ++m) {
    std::vector<double> row(static_cast<std::size_t>(m) + 1);
    for (double& v : row) v = uniform(rng, 0.0, 0.02);
    model.xi.push_back(std::move(row));
  }
  return model;
}

inline Mat random_hankel(std::mt19937_64& rng, Index rows, Index cols) {
  Vec skew(rows + cols - 1);
  for (Index i = 0; i < skew.size(); ++i) skew[i] = uniform(rng, -2.0, 2.0);
  return polycorr::hankel_from_skew(rows, cols, skew);
}

// --- exponent-list oracle for the eliminating/duplicating stacks ----------
//
// vec(H tensor ... tensor H) carries monomial exponents; the list for a
// Kronecker product concatenates sums. Built by direct recursion on lists,
// independent of any digit-sum formula in the library.

inline std::vector<std::int64_t> kron_exponents(const std::vector<std::int64_t>& a,
                                                const std::vector<std::int64_t>& b) {
  std::vector<std::int64_t> out;
  out.reserve(a.size() * b.size());
  for (std::int64_t ea : a)
    for (std::int64_t eb : b) out.push_back(ea + eb);
  return out;
}

// Exponent of every entry of vec(X_n^{(r)}) = vec of the (r+1)-fold tensor
// power of H_n.
inline std::vector<std::int64_t> tensor_power_exponents(int n, int r) {
  std::vector<std::int64_t> h(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) h[static_cast<std::size_t>(k)] = k;
  std::vector<std::int64_t> out = h;
  for (int level = 0; level < r; ++level) out = kron_exponents(out, h);
  return out;
}

// --- generator row oracle --------------------------------------------------
//
// Coefficients of the generator applied to x^k, assembled with plain
// polynomial arithmetic: b(x) k x^{k-1} + (1/2) sigma^2(x) k(k-1) x^{k-2}
// + sum_{j=2}^k C(k,j) x^{k-j} * (jump j-th moment polynomial).
inline std::vector<double> generator_row_oracle(const polycorr::PolyModel& model, int k, int n) {
  std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
  auto add = [&](int power, double coeff) {
    if (coeff != 0.0) row.at(static_cast<std::size_t>(power)) += coeff;
  };
  if (k >= 1) {
    add(k - 1, model.b0 * k);
    add(k, model.b1 * k);
  }
  if (k >= 2) {
    const double half_kk = 0.5 * k * (k - 1);
    add(k - 2, model.sigma0 * half_kk);
    add(k - 1, model.sigma1 * half_kk);
    add(k, model.sigma2 * half_kk);
    for (int j = 2; j <= k; ++j) {
      const double c = polycorr::binomial(k, j);
      if (static_cast<std::size_t>(j - 2) >= model.xi.size()) continue;
      const auto& xi_row = model.xi[static_cast<std::size_t>(j - 2)];
      for (std::size_t i = 0; i < xi_row.size(); ++i)
        add(k - j + static_cast<int>(i), c * xi_row[i]);
    }
  }
  return row;
}

// --- deterministic flow (sigma = 0, no jumps) -------------------------------

inline double ode_flow(double b0, double b1, double y, double dt) {
  if (b1 == 0.0) return y + b0 * dt;
  const double g = std::expm1(b1 * dt);
  return y * (1.0 + g) + b0 * g / b1;
}

inline double eval_poly(const Vec& p, double x) {
  double acc = 0.0;
  for (Index i = p.size() - 1; i >= 0; --i) acc = acc * x + p[i];
  return acc;
}

// Correlator of a deterministic model is just a product of evaluations along
// the flow; polys[k] applies at s_{m-k}.
inline double deterministic_correlator(const polycorr::CorrelatorSpec& spec) {
  const int m = spec.grid.m();
  double prod = 1.0;
  for (int j = 0; j <= m; ++j) {
    const double yj = ode_flow(spec.model.b0, spec.model.b1, spec.y, spec.grid.s[static_cast<std::size_t>(j)] - spec.grid.t);
    prod *= eval_poly(spec.polys[static_cast<std::size_t>(m - j)], yj);
  }
  return prod;
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 0.0) {
  const double diff = std::abs(a - b);
  return diff <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs_floor);
}

}  // namespace testutil
