#pragma once

#include <functional>
#include <map>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polycorr/linalg.hpp"
#include "polycorr/model.hpp"

namespace polycorr {

// Action of the infinitesimal generator on the monomial basis, restricted to
// polynomials of degree <= n:
//
//   E[p(Y_T) | F_t] = pvec^T e^{G_n (T-t)} H_n(Y_t).
//
// G_n is (n+1) x (n+1), lower triangular, with diagonal (0, b1, c_2, .., c_n).
// For pure diffusions it is lower tri-diagonal (bandwidth 2 below the
// diagonal). Row k collects the coefficients of the polynomial G x^k.
struct GeneratorMatrix {
  int n{0};
  Mat matrix;
};

// Requires n >= 1. With jumps present the moment table must cover order n.
GeneratorMatrix generator_matrix(const PolyModel& model, int n);

// Diagonal eigenvalues (0, c_1, c_2, ..., c_n) with c_1 = b1 and
// c_j = j b1 + j(j-1)/2 sigma2 + sum_{k=2}^j C(j,k) xi_k^k.
std::vector<double> generator_diagonal(const PolyModel& model, int n);

// The closed-form exponential recursion is valid iff c_j != 0 for
// 2 <= j <= n and all c_j are pairwise distinct (c_1 = b1 may vanish).
// Comparisons use a relative tolerance of 1e-12 against max(1, max |c_j|).
struct ExpmConditions {
  bool ok{false};
  std::string detail;
  std::vector<double> diagonal;
};

ExpmConditions expm_conditions(const PolyModel& model, int n);

// Raised when the recursion preconditions fail: callers should retry with the
// dense route.
class RecursionConditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// e^{G_n t} by the block recursion
//
//   e^{G_n t} = [ e^{G_{n-1} t}                                   0        ]
//               [ a_n^T L_n^{-1} (e^{c_n t} I - e^{G_{n-1} t})    e^{c_n t}]
//
// with L_n = c_n I - G_{n-1}, solved by triangular substitution. The degree-1
// base case is closed form. Throws RecursionConditionError when
// expm_conditions(model, n) fails.
Mat generator_expm_recursive(const PolyModel& model, int n, double t);

// Dense scaling-and-squaring Pade exponential of M*t; t = 0 returns the
// identity exactly.
Mat expm_dense(const Mat& m, double t);

enum class ExpmPolicy {
  recursive_strict,         // recursion or RecursionConditionError
  recursive_with_fallback,  // recursion when conditions hold, else dense
  dense_always,
};

Mat generator_expm(const PolyModel& model, int n, double t,
                   ExpmPolicy policy = ExpmPolicy::recursive_with_fallback);

// Change of polynomial basis. coords_new = mat * coords_monomial for basis
// vectors stacked as rows of mat; mat is unit lower triangular for graded
// bases, inv its exact triangular inverse.
struct BasisChange {
  int n{0};
  Mat mat;
  Mat inv;
};

// Probabilists' Hermite basis He_0..He_n, He_{k+1} = x He_k - k He_{k-1}.
BasisChange hermite_basis_matrix(int n);

// Generator in the new basis: mat * G * inv. Exponentials transport the same
// way, so exponentiate G first and conjugate after.
Mat change_of_basis(const GeneratorMatrix& g, const BasisChange& basis);
Mat transport_expm(const Mat& exp_g, const BasisChange& basis);

// Memo for exponentials reused across correlator calls (a price sweep asks
// for the same (degree, dt) many times). Keyed on (n, dt); the caller binds
// one model and one policy per cache instance. Concurrent get() is safe;
// values are stable once inserted.
class ExpmCache {
 public:
  const Mat& get_or_compute(int n, double dt, const std::function<Mat()>& compute);
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::pair<int, double>, Mat> store_;
};

}  // namespace polycorr
