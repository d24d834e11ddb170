#pragma once

#include <vector>

#include <json.hpp>

#include "polycorr/correlator.hpp"

namespace polycorr {

// Discretely monitored arithmetic-average option on the polynomial model:
// the average over the grid is pushed through a polynomial payoff, which
// turns the price into a weighted sum of cross-moments.
struct AsianSpec {
  PolyModel model;
  double rate{0.0};
  TimeGrid grid;
  Vec payoff;  // coefficients of the payoff polynomial in the average
  double y{0.0};
  int degree_cap{12};  // bound on n(m+1) across generated correlator calls
};

// One term of ((Y_0 + ... + Y_m)/(m+1))^k: exponent per grid slot and the
// scaled multinomial weight k!/(prod k_j!)/(m+1)^k.
struct MultiIndexTerm {
  std::vector<int> exponents;
  double coeff;
};

// All compositions of k over m+1 slots, lexicographic in the exponent lists.
// Weights sum to 1 at all-equal arguments.
std::vector<MultiIndexTerm> average_power_expansion(int m, int k);

// e^{-r(T-t)} E[payoff(average)] as a deterministic (fixed-order) sum of
// correlators. Throws when payoff degree times (m+1) exceeds degree_cap,
// reporting the cap that would be required.
double asian_price_poly(const AsianSpec& spec, const EvalOptions& opts = {});

// Truncated expansion of E[exp(lambda * integral_t^T Y ds) | Y(t) = y] for
// lambda <= 0:
//
//   sum_{k=0}^{kbar} lambda^k * I_k,
//   I_k = ordered integral over t < s_1 < ... < s_k < T of E[Y(s_1)...Y(s_k)],
//
// evaluated by symmetrized Gauss-Legendre quadrature on the cube divided by
// k! (coincident nodes merge into higher powers). truncation_term reports the
// magnitude of the last added term.
struct IntegratedMomentResult {
  double value{0.0};
  double truncation_term{0.0};
};

IntegratedMomentResult exp_integrated_moment(const PolyModel& model, double lambda, double t,
                                             double T, double y, int kbar, int nodes_per_dim,
                                             const EvalOptions& opts = {});

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int npoints, std::vector<double>& nodes, std::vector<double>& weights);

// Wire format: CorrelatorSpec fields plus "r" and "payoff"; "polys" is
// replaced by the payoff coefficient array.
AsianSpec asian_spec_from_json(const nlohmann::json& j);
nlohmann::json asian_spec_to_json(const AsianSpec& spec);

}  // namespace polycorr
