#include "polycorr/generator.hpp"

#include <cmath>
#include <mutex>

#include <unsupported/Eigen/MatrixFunctions>

namespace polycorr {

namespace {

void require_degree(int n, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": degree must be >= 1");
}

void require_jump_cover(const PolyModel& model, int n, const char* who) {
  if (model.has_jumps() && model.max_jump_order() < n)
    throw std::invalid_argument(std::string(who) + ": jump moment table covers order " +
                                std::to_string(model.max_jump_order()) + ", need " +
                                std::to_string(n));
}

double xi_or_zero(const PolyModel& model, int m, int i) {
  return model.has_jumps() ? model.xi_value(m, i) : 0.0;
}

}  // namespace

GeneratorMatrix generator_matrix(const PolyModel& model, int n) {
  require_degree(n, "generator_matrix");
  require_jump_cover(model, n, "generator_matrix");

  Mat g = Mat::Zero(n + 1, n + 1);
  g(1, 0) = model.b0;
  g(1, 1) = model.b1;
  for (int k = 2; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double half = 0.5 * kk * (kk - 1.0);

    // col k-1 holds a_k^1, col k-i holds a_k^i, diagonal holds c_k
    double a1 = kk * model.b0 + half * model.sigma1;
    double a2 = half * model.sigma0;
    double ck = kk * model.b1 + half * model.sigma2;
    for (int j = 2; j <= k; ++j) {
      const double c = binomial(k, j);
      a1 += c * xi_or_zero(model, j, j - 1);
      a2 += c * xi_or_zero(model, j, j - 2);
      ck += c * xi_or_zero(model, j, j);
    }
    g(k, k - 1) = a1;
    g(k, k - 2) = a2;
    g(k, k) = ck;
    for (int i = 3; i <= k; ++i) {
      double ai = 0.0;
      for (int j = i; j <= k; ++j) ai += binomial(k, j) * xi_or_zero(model, j, j - i);
      g(k, k - i) = ai;
    }
  }
  return {n, std::move(g)};
}

std::vector<double> generator_diagonal(const PolyModel& model, int n) {
  require_degree(n, "generator_diagonal");
  require_jump_cover(model, n, "generator_diagonal");
  std::vector<double> diag(static_cast<std::size_t>(n) + 1, 0.0);
  diag[1] = model.b1;
  for (int k = 2; k <= n; ++k) {
    double ck = k * model.b1 + 0.5 * k * (k - 1.0) * model.sigma2;
    for (int j = 2; j <= k; ++j) ck += binomial(k, j) * xi_or_zero(model, j, j);
    diag[static_cast<std::size_t>(k)] = ck;
  }
  return diag;
}

ExpmConditions expm_conditions(const PolyModel& model, int n) {
  require_degree(n, "expm_conditions");
  ExpmConditions cond;
  cond.diagonal = generator_diagonal(model, n);

  double scale = 1.0;
  for (int j = 1; j <= n; ++j) scale = std::max(scale, std::abs(cond.diagonal[static_cast<std::size_t>(j)]));
  const double tol = 1e-12 * scale;

  for (int j = 2; j <= n; ++j)
    if (std::abs(cond.diagonal[static_cast<std::size_t>(j)]) <= tol) {
      cond.detail = "eigenvalue c_" + std::to_string(j) + " vanishes";
      return cond;
    }
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (std::abs(cond.diagonal[static_cast<std::size_t>(i)] - cond.diagonal[static_cast<std::size_t>(j)]) <= tol) {
        cond.detail = "eigenvalues c_" + std::to_string(i) + " and c_" + std::to_string(j) +
                      " coincide";
        return cond;
      }
  cond.ok = true;
  cond.detail = "distinct nonzero diagonal";
  return cond;
}

Mat generator_expm_recursive(const PolyModel& model, int n, double t) {
  require_degree(n, "generator_expm_recursive");
  const ExpmConditions cond = expm_conditions(model, n);
  if (!cond.ok) throw RecursionConditionError("generator_expm_recursive: " + cond.detail);

  const Mat g = generator_matrix(model, n).matrix;

  Mat e(2, 2);
  e(0, 0) = 1.0;
  e(0, 1) = 0.0;
  if (model.b1 != 0.0) {
    e(1, 0) = model.b0 * std::expm1(model.b1 * t) / model.b1;
    e(1, 1) = std::exp(model.b1 * t);
  } else {
    e(1, 0) = model.b0 * t;
    e(1, 1) = 1.0;
  }

  for (int k = 2; k <= n; ++k) {
    const double ck = g(k, k);
    const double eck = std::exp(ck * t);
    const Vec a = g.row(k).head(k).transpose();
    Mat lambda = -g.topLeftCorner(k, k);
    lambda.diagonal().array() += ck;

    // w^T = a^T Lambda^{-1}  <=>  Lambda^T w = a, upper triangular solve
    const Vec w = lambda.transpose().triangularView<Eigen::Upper>().solve(a);

    Mat next = Mat::Zero(k + 1, k + 1);
    next.topLeftCorner(k, k) = e;
    Mat shifted = -e;
    shifted.diagonal().array() += eck;
    next.row(k).head(k) = w.transpose() * shifted;
    next(k, k) = eck;
    e = std::move(next);
  }
  return e;
}

Mat expm_dense(const Mat& m, double t) {
  if (m.rows() != m.cols()) throw std::invalid_argument("expm_dense: matrix must be square");
  if (t == 0.0 || m.isZero(0.0)) return Mat::Identity(m.rows(), m.cols());
  return (m * t).exp();
}

Mat generator_expm(const PolyModel& model, int n, double t, ExpmPolicy policy) {
  switch (policy) {
    case ExpmPolicy::dense_always:
      return expm_dense(generator_matrix(model, n).matrix, t);
    case ExpmPolicy::recursive_strict:
      return generator_expm_recursive(model, n, t);
    case ExpmPolicy::recursive_with_fallback:
    default: {
      if (expm_conditions(model, n).ok) return generator_expm_recursive(model, n, t);
      return expm_dense(generator_matrix(model, n).matrix, t);
    }
  }
}

BasisChange hermite_basis_matrix(int n) {
  require_degree(n, "hermite_basis_matrix");
  Mat m = Mat::Zero(n + 1, n + 1);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  for (int k = 1; k < n; ++k) {
    // He_{k+1} = x He_k - k He_{k-1}
    for (int j = 0; j <= k; ++j) m(k + 1, j + 1) += m(k, j);
    for (int j = 0; j < k; ++j) m(k + 1, j) -= k * m(k - 1, j);
  }
  const Mat inv =
      m.triangularView<Eigen::Lower>().solve(Mat::Identity(n + 1, n + 1));
  return {n, std::move(m), inv};
}

Mat change_of_basis(const GeneratorMatrix& g, const BasisChange& basis) {
  if (basis.n != g.n) throw std::invalid_argument("change_of_basis: degree mismatch");
  return basis.mat * g.matrix * basis.inv;
}

Mat transport_expm(const Mat& exp_g, const BasisChange& basis) {
  if (exp_g.rows() != basis.mat.rows())
    throw std::invalid_argument("transport_expm: degree mismatch");
  return basis.mat * exp_g * basis.inv;
}

const Mat& ExpmCache::get_or_compute(int n, double dt, const std::function<Mat()>& compute) {
  const std::pair<int, double> key{n, dt};
  {
    std::shared_lock lock(mutex_);
    auto it = store_.find(key);
    if (it != store_.end()) return it->second;
  }
  Mat value = compute();
  std::unique_lock lock(mutex_);
  auto [it, inserted] = store_.try_emplace(key, std::move(value));
  return it->second;
}

std::size_t ExpmCache::size() const {
  std::shared_lock lock(mutex_);
  return store_.size();
}

}  // namespace polycorr
