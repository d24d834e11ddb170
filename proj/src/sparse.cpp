#include "polycorr/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace polycorr {

namespace {

void check_shape(const SparseMat& a) {
  for (const Triplet& e : a.entries)
    if (e.row < 0 || e.row >= a.rows || e.col < 0 || e.col >= a.cols)
      throw std::invalid_argument("sparse: entry out of bounds");
}

void sort_entries(SparseMat& a) {
  std::sort(a.entries.begin(), a.entries.end(), [](const Triplet& x, const Triplet& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });
}

}  // namespace

SparseMat sparse_identity(Index k) {
  SparseMat out{k, k, {}};
  out.entries.reserve(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) out.entries.push_back({i, i, 1.0});
  return out;
}

SparseMat kron_identity(Index blocks, const SparseMat& a) {
  if (blocks < 1) throw std::invalid_argument("kron_identity: blocks must be >= 1");
  SparseMat out{blocks * a.rows, blocks * a.cols, {}};
  out.entries.reserve(a.entries.size() * static_cast<std::size_t>(blocks));
  for (Index b = 0; b < blocks; ++b)
    for (const Triplet& e : a.entries)
      out.entries.push_back({b * a.rows + e.row, b * a.cols + e.col, e.value});
  return out;
}

SparseMat sparse_multiply(const SparseMat& a, const SparseMat& b) {
  if (a.cols != b.rows) throw std::invalid_argument("sparse_multiply: inner dimension mismatch");
  check_shape(a);
  check_shape(b);

  std::vector<std::vector<const Triplet*>> b_rows(static_cast<std::size_t>(b.rows));
  for (const Triplet& e : b.entries) b_rows[static_cast<std::size_t>(e.row)].push_back(&e);

  std::map<std::pair<Index, Index>, double> acc;
  for (const Triplet& ea : a.entries)
    for (const Triplet* eb : b_rows[static_cast<std::size_t>(ea.col)])
      acc[{ea.row, eb->col}] += ea.value * eb->value;

  SparseMat out{a.rows, b.cols, {}};
  out.entries.reserve(acc.size());
  for (const auto& [rc, v] : acc)
    if (v != 0.0) out.entries.push_back({rc.first, rc.second, v});
  sort_entries(out);
  return out;
}

SparseMat sparse_transpose(const SparseMat& a) {
  SparseMat out{a.cols, a.rows, {}};
  out.entries.reserve(a.entries.size());
  for (const Triplet& e : a.entries) out.entries.push_back({e.col, e.row, e.value});
  sort_entries(out);
  return out;
}

Mat sparse_to_dense(const SparseMat& a) {
  check_shape(a);
  Mat out = Mat::Zero(a.rows, a.cols);
  for (const Triplet& e : a.entries) out(e.row, e.col) += e.value;
  return out;
}

Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> sparse_to_dense_int(
    const SparseMat& a) {
  check_shape(a);
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(a.rows, a.cols);
  for (const Triplet& e : a.entries) {
    const double r = std::round(e.value);
    if (std::abs(e.value - r) != 0.0)
      throw std::invalid_argument("sparse_to_dense_int: non-integer entry");
    out(e.row, e.col) += static_cast<std::int64_t>(r);
  }
  return out;
}

Vec sparse_apply(const SparseMat& a, const Vec& x) {
  if (x.size() != a.cols) throw std::invalid_argument("sparse_apply: size mismatch");
  Vec out = Vec::Zero(a.rows);
  for (const Triplet& e : a.entries) out[e.row] += e.value * x[e.col];
  return out;
}

std::vector<Index> selection_of(const SparseMat& a) {
  std::vector<Index> sel(static_cast<std::size_t>(a.rows), Index{-1});
  for (const Triplet& e : a.entries) {
    if (e.value != 1.0 || sel[static_cast<std::size_t>(e.row)] != -1)
      throw std::invalid_argument("selection_of: matrix is not a row selection");
    sel[static_cast<std::size_t>(e.row)] = e.col;
  }
  for (Index c : sel)
    if (c == -1) throw std::invalid_argument("selection_of: row without entry");
  return sel;
}

}  // namespace polycorr
