#pragma once

#include <vector>

#include "polycorr/correlator.hpp"

namespace polycorr {

// d/dy of the monomial outer-power matrix X_n^(m)(y), by the product rule on
// the Kronecker factors:
//
//   dX^(m) = (dH)^T ⊗ X^(m-1) + H^T ⊗ dX^(m-1),   dX^(0) = dH = (0, 1, 2y, ...).
Mat dx_dy(double y, int n, int m);

// Sensitivity of the correlator to the state y: same chain as the correlator
// with vec(dX^(m)(y)) as the initial vector.
double delta(const CorrelatorSpec& spec, const EvalOptions& opts = {});

// Sensitivities to each observation time s_j. Each one is a difference of two
// chains with a lifted generator inserted at the factors adjacent to s_j; the
// j = m term has a single chain. m = 0 reduces to pvec^T G e^{G(s_0-t)} H(y).
double theta(const CorrelatorSpec& spec, int j, const EvalOptions& opts = {});

struct GreekReport {
  double value{0.0};  // the correlator itself
  double delta{0.0};
  std::vector<double> thetas;  // d/ds_j for j = 0..m
};

GreekReport greeks(const CorrelatorSpec& spec, const EvalOptions& opts = {});

}  // namespace polycorr
