#pragma once

#include <cstdint>
#include <vector>

#include "polycorr/linalg.hpp"

namespace polycorr {

// Triplet-form sparse matrix for the 0/1 selection operators. Entries are
// kept sorted by (row, col) with no duplicates. Values are small integers in
// practice, so double storage is exact.
struct Triplet {
  Index row{0};
  Index col{0};
  double value{0.0};
};

struct SparseMat {
  Index rows{0};
  Index cols{0};
  std::vector<Triplet> entries;
};

SparseMat sparse_identity(Index k);

// I_blocks ⊗ a: block-diagonal replication.
SparseMat kron_identity(Index blocks, const SparseMat& a);

SparseMat sparse_multiply(const SparseMat& a, const SparseMat& b);

SparseMat sparse_transpose(const SparseMat& a);

Mat sparse_to_dense(const SparseMat& a);

// Exact integer view; throws if an entry is not integral.
Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> sparse_to_dense_int(
    const SparseMat& a);

Vec sparse_apply(const SparseMat& a, const Vec& x);

// For matrices with exactly one entry of value 1 per row (every eliminating /
// duplicating operator and their order-m products), returns row -> column of
// that entry. Throws otherwise.
std::vector<Index> selection_of(const SparseMat& a);

}  // namespace polycorr
