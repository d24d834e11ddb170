#pragma once

#include <Eigen/Dense>

namespace polycorr {

// Dense storage is column-major throughout, so vec() is a straight reinterpret
// of the underlying buffer. All scalars are 64-bit doubles.
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using RowVec = Eigen::RowVectorXd;
using Index = Eigen::Index;

// Column-stacking: vec(A) lists the columns of A top to bottom.
Vec vec(const Mat& a);

// Inverse of vec for a known shape: B(i,j) = v[rows*j + i]. Throws if
// v.size() != rows*cols.
Mat vec_inverse(const Vec& v, Index rows, Index cols);

// First column, then the last row from its second entry on. Length is
// rows + cols - 1. For a Hankel matrix this is the vector of distinct
// skew-diagonal values.
Vec vec_l(const Mat& a);

// Kronecker product, (A ⊗ B)(ia*pb + ib, ja*qb + jb) = A(ia,ja) * B(ib,jb).
Mat kron(const Mat& a, const Mat& b);

// d-fold product A ⊗ A ⊗ ... ⊗ A ⊗ B with d copies of A; d = 0 yields B.
Mat d_kron(const Mat& a, const Mat& b, int d);

// (1, x, x^2, ..., x^max_exp), built by repeated multiplication. Every other
// power-of-x in this library is read from a table built exactly this way, so
// equalities between them are exact, not approximate.
Vec power_table(double x, int max_exp);

// Monomial basis vector H_n(x) = (1, x, ..., x^n)^T. Requires n >= 0.
Vec monomial_basis(double x, int n);

// X_n^(r)(x) = H_n(x)^T ⊗^r H_n(x), an (n+1) x (n+1)^r matrix of monomials.
// r = 0 gives the column H_n(x); r = 1 gives the Hankel moment layout.
// Entry (i,j) is x^(i + s) where s is the base-(n+1) digit sum of j, taken
// from a single shared power table.
Mat x_matrix(double x, int n, int r);

// vec(x_matrix(x, n, r)) without forming the matrix.
Vec vec_x_matrix(double x, int n, int r);

// Hankel matrix with A(i,j) = skew[i+j]; skew.size() must be rows+cols-1.
Mat hankel_from_skew(Index rows, Index cols, const Vec& skew);

// Entries constant along skew-diagonals, compared with |diff| <= tol.
bool is_hankel(const Mat& a, double tol = 0.0);

}  // namespace polycorr
