#include "polycorr/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace polycorr {

Vec vec(const Mat& a) { return a.reshaped(); }

Mat vec_inverse(const Vec& v, Index rows, Index cols) {
  if (rows < 0 || cols < 0 || v.size() != rows * cols)
    throw std::invalid_argument("vec_inverse: size mismatch, expected rows*cols entries");
  return v.reshaped(rows, cols);
}

Vec vec_l(const Mat& a) {
  const Index r = a.rows(), c = a.cols();
  if (r == 0 || c == 0) throw std::invalid_argument("vec_l: empty matrix");
  Vec out(r + c - 1);
  out.head(r) = a.col(0);
  for (Index j = 1; j < c; ++j) out[r + j - 1] = a(r - 1, j);
  return out;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat d_kron(const Mat& a, const Mat& b, int d) {
  if (d < 0) throw std::invalid_argument("d_kron: d must be >= 0");
  if (d == 0) return b;
  Mat left = a;
  for (int k = 1; k < d; ++k) left = kron(left, a);
  return kron(left, b);
}

Vec power_table(double x, int max_exp) {
  if (max_exp < 0) throw std::invalid_argument("power_table: negative exponent");
  Vec p(max_exp + 1);
  p[0] = 1.0;
  for (int k = 1; k <= max_exp; ++k) p[k] = p[k - 1] * x;
  return p;
}

Vec monomial_basis(double x, int n) { return power_table(x, n); }

namespace {

Index ipow(Index base, int e) {
  Index r = 1;
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

int digit_sum(Index j, Index base) {
  int s = 0;
  while (j > 0) {
    s += static_cast<int>(j % base);
    j /= base;
  }
  return s;
}

}  // namespace

Mat x_matrix(double x, int n, int r) {
  if (n < 1) throw std::invalid_argument("x_matrix: n must be >= 1");
  if (r < 0) throw std::invalid_argument("x_matrix: r must be >= 0");
  const Index dim = n + 1;
  const Index cols = ipow(dim, r);
  const Vec pow = power_table(x, (r + 1) * n);
  Mat out(dim, cols);
  for (Index j = 0; j < cols; ++j) {
    const int s = digit_sum(j, dim);
    for (Index i = 0; i < dim; ++i) out(i, j) = pow[i + s];
  }
  return out;
}

Vec vec_x_matrix(double x, int n, int r) {
  if (n < 1) throw std::invalid_argument("vec_x_matrix: n must be >= 1");
  if (r < 0) throw std::invalid_argument("vec_x_matrix: r must be >= 0");
  const Index dim = n + 1;
  const Index len = ipow(dim, r + 1);
  const Vec pow = power_table(x, (r + 1) * n);
  Vec out(len);
  for (Index l = 0; l < len; ++l) out[l] = pow[digit_sum(l, dim)];
  return out;
}

Mat hankel_from_skew(Index rows, Index cols, const Vec& skew) {
  if (rows < 1 || cols < 1 || skew.size() != rows + cols - 1)
    throw std::invalid_argument("hankel_from_skew: need rows+cols-1 skew values");
  Mat out(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) out(i, j) = skew[i + j];
  return out;
}

bool is_hankel(const Mat& a, double tol) {
  for (Index j = 0; j + 1 < a.cols(); ++j)
    for (Index i = 0; i + 1 < a.rows(); ++i)
      if (std::abs(a(i + 1, j) - a(i, j + 1)) > tol) return false;
  return true;
}

}  // namespace polycorr
