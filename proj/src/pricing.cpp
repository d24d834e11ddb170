#include "polycorr/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace polycorr {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void compositions(int remaining, int slot, int slots, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (slot == slots - 1) {
    current[static_cast<std::size_t>(slot)] = remaining;
    out.push_back(current);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    current[static_cast<std::size_t>(slot)] = k;
    compositions(remaining - k, slot + 1, slots, current, out);
  }
}

Vec monomial(int e) {
  Vec p = Vec::Zero(e + 1);
  p[e] = 1.0;
  return p;
}

}  // namespace

std::vector<MultiIndexTerm> average_power_expansion(int m, int k) {
  if (m < 0 || k < 0) throw std::invalid_argument("average_power_expansion: m, k must be >= 0");
  if (k > 18) throw std::invalid_argument("average_power_expansion: k too large for exact weights");

  std::vector<std::vector<int>> exps;
  std::vector<int> current(static_cast<std::size_t>(m) + 1, 0);
  compositions(k, 0, m + 1, current, exps);

  const double scale = std::pow(static_cast<double>(m + 1), -k);
  const double kfact = factorial(k);
  std::vector<MultiIndexTerm> terms;
  terms.reserve(exps.size());
  for (auto& e : exps) {
    double denom = 1.0;
    for (int kj : e) denom *= factorial(kj);
    terms.push_back({std::move(e), scale * kfact / denom});
  }
  return terms;
}

double asian_price_poly(const AsianSpec& spec, const EvalOptions& opts) {
  validate_grid(spec.grid);
  if (spec.payoff.size() == 0) throw std::invalid_argument("asian: empty payoff polynomial");
  const int m = spec.grid.m();
  const int degree = static_cast<int>(spec.payoff.size()) - 1;
  if (degree * (m + 1) > spec.degree_cap)
    throw std::invalid_argument(
        "asian: payoff degree " + std::to_string(degree) + " over " + std::to_string(m + 1) +
        " dates needs total correlator degree " + std::to_string(degree * (m + 1)) +
        "; raise degree_cap (currently " + std::to_string(spec.degree_cap) + ")");

  ExpmCache local_cache;
  EvalOptions eval = opts;
  if (!eval.cache) eval.cache = &local_cache;

  double total = spec.payoff[0];
  for (int d = 1; d <= degree; ++d) {
    const double cd = spec.payoff[d];
    if (cd == 0.0) continue;
    for (const MultiIndexTerm& term : average_power_expansion(m, d)) {
      CorrelatorSpec cs;
      cs.model = spec.model;
      cs.grid = spec.grid;
      cs.y = spec.y;
      cs.polys.resize(static_cast<std::size_t>(m) + 1);
      // polys[k] pairs with s_{m-k}, so slot j's exponent lands at index m-j
      for (int j = 0; j <= m; ++j)
        cs.polys[static_cast<std::size_t>(m - j)] = monomial(term.exponents[static_cast<std::size_t>(j)]);
      total += cd * term.coeff * correlator(cs, eval);
    }
  }
  const double horizon = spec.grid.s.back() - spec.grid.t;
  return std::exp(-spec.rate * horizon) * total;
}

void gauss_legendre(int npoints, std::vector<double>& nodes, std::vector<double>& weights) {
  if (npoints < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  nodes.assign(static_cast<std::size_t>(npoints), 0.0);
  weights.assign(static_cast<std::size_t>(npoints), 0.0);
  const int half = (npoints + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (npoints + 0.5));
    double pn = 0.0, pn1 = 0.0, dpn = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      pn = 1.0;
      pn1 = 0.0;
      for (int j = 1; j <= npoints; ++j) {
        const double prev = pn1;
        pn1 = pn;
        pn = ((2.0 * j - 1.0) * z * pn1 - (j - 1.0) * prev) / j;
      }
      dpn = npoints * (z * pn - pn1) / (z * z - 1.0);
      const double step = pn / dpn;
      z -= step;
      if (std::abs(step) < 1e-15) break;
    }
    nodes[static_cast<std::size_t>(i)] = -z;
    nodes[static_cast<std::size_t>(npoints - 1 - i)] = z;
    const double w = 2.0 / ((1.0 - z * z) * dpn * dpn);
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(npoints - 1 - i)] = w;
  }
}

namespace {

// Non-decreasing index tuples enumerate the symmetric quadrature nodes once;
// perms carries how many orderings of the cube collapse onto each tuple.
void sorted_tuples(int k, int npoints, int start, std::vector<int>& current,
                   const std::function<void(const std::vector<int>&)>& visit) {
  if (static_cast<int>(current.size()) == k) {
    visit(current);
    return;
  }
  for (int i = start; i < npoints; ++i) {
    current.push_back(i);
    sorted_tuples(k, npoints, i, current, visit);
    current.pop_back();
  }
}

}  // namespace

IntegratedMomentResult exp_integrated_moment(const PolyModel& model, double lambda, double t,
                                             double T, double y, int kbar, int nodes_per_dim,
                                             const EvalOptions& opts) {
  if (lambda > 0.0) throw std::invalid_argument("exp_integrated_moment: lambda must be <= 0");
  if (kbar < 0) throw std::invalid_argument("exp_integrated_moment: kbar must be >= 0");
  if (nodes_per_dim < 2) throw std::invalid_argument("exp_integrated_moment: need >= 2 nodes per dim");
  if (!(t < T)) throw std::invalid_argument("exp_integrated_moment: requires t < T");

  std::vector<double> gl_nodes, gl_weights;
  gauss_legendre(nodes_per_dim, gl_nodes, gl_weights);
  const double mid = 0.5 * (t + T), halfwidth = 0.5 * (T - t);
  std::vector<double> times(gl_nodes.size()), scaled_w(gl_weights.size());
  for (std::size_t i = 0; i < gl_nodes.size(); ++i) {
    times[i] = mid + halfwidth * gl_nodes[i];
    scaled_w[i] = halfwidth * gl_weights[i];
  }

  ExpmCache local_cache;
  EvalOptions eval = opts;
  if (!eval.cache) eval.cache = &local_cache;

  IntegratedMomentResult res;
  res.value = 1.0;
  res.truncation_term = 1.0;

  double lambda_pow = 1.0;
  for (int k = 1; k <= kbar; ++k) {
    lambda_pow *= lambda;
    double cube = 0.0;
    std::vector<int> tuple;
    sorted_tuples(k, nodes_per_dim, 0, tuple, [&](const std::vector<int>& idx) {
      double w = 1.0;
      for (int i : idx) w *= scaled_w[static_cast<std::size_t>(i)];

      // distinct orderings of the multiset, and merged powers per unique node
      double perms = factorial(k);
      std::vector<double> u;
      std::vector<int> powers;
      for (std::size_t a = 0; a < idx.size();) {
        std::size_t b = a;
        while (b < idx.size() && idx[b] == idx[a]) ++b;
        perms /= factorial(static_cast<int>(b - a));
        u.push_back(times[static_cast<std::size_t>(idx[a])]);
        powers.push_back(static_cast<int>(b - a));
        a = b;
      }

      CorrelatorSpec cs;
      cs.model = model;
      cs.grid = TimeGrid{t, u};
      cs.y = y;
      const int q = static_cast<int>(u.size()) - 1;
      cs.polys.resize(u.size());
      for (int j = 0; j <= q; ++j)
        cs.polys[static_cast<std::size_t>(q - j)] = monomial(powers[static_cast<std::size_t>(j)]);
      cube += w * perms * correlator(cs, eval);
    });
    const double term = lambda_pow / factorial(k) * cube;
    res.value += term;
    res.truncation_term = std::abs(term);
  }
  return res;
}

AsianSpec asian_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("asian: expected a JSON object");
  for (const char* key : {"model", "r", "payoff", "t", "s", "y"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("asian: missing field '") + key + "'");
  if (!j.at("r").is_number()) throw std::invalid_argument("asian: 'r' must be a number");

  nlohmann::json cj = j;
  cj.erase("r");
  cj.erase("payoff");
  if (cj.contains("degree_cap")) cj.erase("degree_cap");
  cj["polys"] = nlohmann::json::array({j.at("payoff")});
  const CorrelatorSpec cs = correlator_spec_from_json(cj);

  AsianSpec spec;
  spec.model = cs.model;
  spec.grid = cs.grid;
  spec.y = cs.y;
  spec.payoff = cs.polys[0];
  spec.rate = j.at("r").get<double>();
  if (j.contains("degree_cap")) {
    if (!j.at("degree_cap").is_number_integer() || j.at("degree_cap").get<int>() < 1)
      throw std::invalid_argument("asian: 'degree_cap' must be a positive integer");
    spec.degree_cap = j.at("degree_cap").get<int>();
  }
  return spec;
}

nlohmann::json asian_spec_to_json(const AsianSpec& spec) {
  nlohmann::json payoff = nlohmann::json::array();
  for (Index i = 0; i < spec.payoff.size(); ++i) payoff.push_back(spec.payoff[i]);
  return nlohmann::json{{"model", model_to_json(spec.model)}, {"r", spec.rate},
                        {"payoff", payoff},                   {"t", spec.grid.t},
                        {"s", spec.grid.s},                   {"y", spec.y},
                        {"degree_cap", spec.degree_cap}};
}

}  // namespace polycorr
