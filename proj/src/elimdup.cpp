#include "polycorr/elimdup.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace polycorr {

namespace {

void require_pos(int n, int m, const char* who) {
  if (n < 1 || m < 1) throw std::invalid_argument(std::string(who) + ": n, m must be >= 1");
}

std::int64_t ipow64(std::int64_t base, int e) {
  std::int64_t r = 1;
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

}  // namespace

SparseMat eliminating_matrix(int n, int m) {
  require_pos(n, m, "eliminating_matrix");
  SparseMat out{static_cast<Index>(n + m - 1), static_cast<Index>(n) * m, {}};
  out.entries.reserve(static_cast<std::size_t>(n + m - 1));
  for (int i = 0; i < n; ++i) out.entries.push_back({i, i, 1.0});
  for (int i = 2; i <= m; ++i)
    out.entries.push_back({static_cast<Index>(n + i - 2), static_cast<Index>(n) * i - 1, 1.0});
  return out;
}

SparseMat duplicating_matrix(int n, int m) {
  require_pos(n, m, "duplicating_matrix");
  SparseMat out{static_cast<Index>(n) * m, static_cast<Index>(n + m - 1), {}};
  out.entries.reserve(static_cast<std::size_t>(n) * m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i)
      out.entries.push_back({static_cast<Index>(n) * j + i, static_cast<Index>(i + j), 1.0});
  return out;
}

SparseMat eliminating_matrix_order(int n, int m) {
  require_pos(n, m, "eliminating_matrix_order");
  SparseMat e = eliminating_matrix(n + 1, n + 1);
  for (int k = 2; k <= m; ++k)
    e = sparse_multiply(eliminating_matrix(n * k + 1, n + 1), kron_identity(n + 1, e));
  return e;
}

SparseMat duplicating_matrix_order(int n, int m) {
  require_pos(n, m, "duplicating_matrix_order");
  SparseMat d = duplicating_matrix(n + 1, n + 1);
  for (int k = 2; k <= m; ++k)
    d = sparse_multiply(kron_identity(n + 1, d), duplicating_matrix(n * k + 1, n + 1));
  return d;
}

std::int64_t block_exponent(int n, int r, std::int64_t k) {
  if (n < 1 || r < 1) throw std::invalid_argument("block_exponent: n, r must be >= 1");
  const std::int64_t count = ipow64(n + 1, r - 1);
  if (k < 1 || k > count) throw std::invalid_argument("block_exponent: k out of range");
  const std::int64_t base = n + 1;
  std::int64_t gamma = 0;
  for (int j = 0; j < r; ++j)
    gamma += ((k - 1) % ipow64(base, r - j)) / ipow64(base, r - 1 - j);
  return gamma;
}

std::vector<std::int64_t> block_cardinality(int n, int r) {
  if (n < 1 || r < 1) throw std::invalid_argument("block_cardinality: n, r must be >= 1");
  std::vector<std::int64_t> coeff{1};
  for (int pass = 1; pass < r; ++pass) {
    std::vector<std::int64_t> next(coeff.size() + static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < coeff.size(); ++i)
      for (int a = 0; a <= n; ++a) next[i + static_cast<std::size_t>(a)] += coeff[i];
    coeff = std::move(next);
  }
  return coeff;
}

std::vector<std::int64_t> dup_column_counts(int n, int m) {
  require_pos(n, m, "dup_column_counts");
  const int lo = std::min(n, m), hi = std::max(n, m);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n + m - 1));
  for (int k = 1; k <= n + m - 1; ++k) {
    std::int64_t c;
    if (k <= lo - 1)
      c = k;
    else if (k <= hi - 1)
      c = lo;
    else
      c = n + m - k;
    counts[static_cast<std::size_t>(k - 1)] = c;
  }
  return counts;
}

}  // namespace polycorr
