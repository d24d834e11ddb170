#pragma once

#include <cstdint>
#include <vector>

#include "polycorr/sparse.hpp"

namespace polycorr {

// Selection operators between the full Kronecker basis of monomials and the
// reduced basis of distinct powers.
//
// vec of an n x m matrix of monomials x^(i+j) holds only n+m-1 distinct
// powers. The eliminating matrix picks one representative per power; the
// duplicating matrix rebuilds the full vec from the reduced vector. Both have
// exactly one unit entry per row, so they act as index gathers.

// E_{n,m}: (n+m-1) x nm. Ones at (i,i) for i = 1..n and at (n+i-1, n*i) for
// i = 2..m, 1-based. eliminating(H_n-basis vec) keeps the first column of the
// source matrix and the tail of its last row.
SparseMat eliminating_matrix(int n, int m);

// D_{n,m}: nm x (n+m-1). Row n(j-1)+i has its unit at column i+j-1, 1-based:
// entry (i,j) of the rebuilt matrix reads reduced coordinate i+j-1.
SparseMat duplicating_matrix(int n, int m);

// Order-m operators for basis degree n, acting on vec(X_n^(m)).
//
//   E^(1) = E_{n+1,n+1},  E^(m) = E_{nm+1,n+1} (I_{n+1} ⊗ E^(m-1))
//   D^(1) = D_{n+1,n+1},  D^(m) = (I_{n+1} ⊗ D^(m-1)) D_{nm+1,n+1}
//
// Shapes: E^(m) is (n(m+1)+1) x (n+1)^(m+1), D^(m) the transpose shape.
// E^(m) vec(X_n^(m)(x)) = H_{n(m+1)}(x) entry for entry.
SparseMat eliminating_matrix_order(int n, int m);
SparseMat duplicating_matrix_order(int n, int m);

// Power of x shared by block k (1-based, 1 <= k <= (n+1)^(r-1)) when
// X_n^(r)(x) is split into (n+1) x (n+1) column blocks: block k equals
// x^gamma X_n^(1)(x). Computed as
//   gamma = sum_{j=0}^{r-1} ((k-1) mod (n+1)^(r-j)) div (n+1)^(r-1-j),
// the base-(n+1) digit sum of k-1.
std::int64_t block_exponent(int n, int r, std::int64_t k);

// Number of blocks of X_n^(r) sharing each power gamma = 0..n(r-1): the
// coefficients of (1 + x + ... + x^n)^(r-1).
std::vector<std::int64_t> block_cardinality(int n, int r);

// Ones per column of D_{n,m}, i.e. multiplicities of the powers 1..n+m-1
// across the full nm-entry layout. Closed form: ramp up to min(n,m), plateau,
// ramp down; equal to the coefficients of (1+...+x^(n-1))(1+...+x^(m-1)).
std::vector<std::int64_t> dup_column_counts(int n, int m);

}  // namespace polycorr
