#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace polycorr {

// One-dimensional polynomial jump-diffusion:
//
//   drift      b(x)      = b0 + b1 x
//   diffusion  sigma^2(x) = sigma0 + sigma1 x + sigma2 x^2
//   jumps      integral z^m l(x, dz) = sum_i xi[m][i] x^i,  m >= 2
//
// The jump moment table is what the generator needs; the measure itself never
// appears. An empty table means pure diffusion.
struct PolyModel {
  double b0{0.0};
  double b1{0.0};
  double sigma0{0.0};
  double sigma1{0.0};
  double sigma2{0.0};

  // xi[k] holds the x-coefficients of the order-(k+2) jump moment, so row k
  // has size k+3. Empty when the model has no jumps.
  std::vector<std::vector<double>> xi;

  bool has_jumps() const { return !xi.empty(); }

  // Highest m with a stored jump moment row; 1 when the table is empty.
  int max_jump_order() const { return xi.empty() ? 1 : static_cast<int>(xi.size()) + 1; }

  // xi_i^m for m >= 2, 0 <= i <= m. Throws when the table does not cover m.
  double xi_value(int m, int i) const;
};

struct ValidationReport {
  bool ok{false};
  std::string message;
  int max_jump_order{1};
  bool jumps{false};
};

// Structural checks: finite coefficients, jump rows of the right length.
ValidationReport validate_polynomial(const PolyModel& model);

// Mixed moments mu_{a,b} of the two jump size factors in
// dY = b dt + sigma dB + delta0(z) dN + delta1(z) Y dN style dynamics:
// mu_{a,b} = integral delta0^a delta1^b d(nu). Triangular table, a+b <= order.
struct JumpSDEMoments {
  // mixed[a][b] for a = 0..order, b = 0..order-a.
  std::vector<std::vector<double>> mixed;

  int order() const { return mixed.empty() ? -1 : static_cast<int>(mixed.size()) - 1; }
  double mu(int a, int b) const;
};

// Binomial expansion of (delta0 + delta1 x)^m: xi_i^m = C(m,i) mu_{m-i,i}.
// Returns rows m = 2..m_max in PolyModel::xi layout. Requires the table to
// cover order m_max.
std::vector<std::vector<double>> jump_moments_from_sde(const JumpSDEMoments& moments, int m_max);

// Exact for arguments below 2^53; Pascal recurrence.
double binomial(int n, int k);

// Wire format:
//   {"b0": ., "b1": ., "sigma0": ., "sigma1": ., "sigma2": .,
//    "xi": [[m, i, value], ...]}
// "xi" is optional; entries not listed are zero. Throws std::invalid_argument
// on malformed content (wrong types, m < 2, i out of range).
PolyModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const PolyModel& model);

}  // namespace polycorr
