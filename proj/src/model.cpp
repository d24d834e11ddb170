#include "polycorr/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace polycorr {

double PolyModel::xi_value(int m, int i) const {
  if (m < 2 || m > max_jump_order())
    throw std::invalid_argument("PolyModel: jump moment order out of table range");
  const auto& row = xi[static_cast<std::size_t>(m - 2)];
  if (i < 0 || i > m || row.size() != static_cast<std::size_t>(m + 1))
    throw std::invalid_argument("PolyModel: malformed jump moment row");
  return row[static_cast<std::size_t>(i)];
}

ValidationReport validate_polynomial(const PolyModel& model) {
  ValidationReport rep;
  rep.jumps = model.has_jumps();
  rep.max_jump_order = model.max_jump_order();

  const double coeffs[] = {model.b0, model.b1, model.sigma0, model.sigma1, model.sigma2};
  for (double c : coeffs)
    if (!std::isfinite(c)) {
      rep.message = "drift/diffusion coefficient is not finite";
      return rep;
    }
  for (std::size_t k = 0; k < model.xi.size(); ++k) {
    if (model.xi[k].size() != k + 3) {
      rep.message = "jump moment row " + std::to_string(k + 2) + " has wrong length";
      return rep;
    }
    for (double v : model.xi[k])
      if (!std::isfinite(v)) {
        rep.message = "jump moment entry is not finite";
        return rep;
      }
  }
  rep.ok = true;
  rep.message = rep.jumps ? "polynomial jump-diffusion, jump moments up to order " +
                                std::to_string(rep.max_jump_order)
                          : "polynomial diffusion, no jumps";
  return rep;
}

double JumpSDEMoments::mu(int a, int b) const {
  if (a < 0 || b < 0 || a + b > order())
    throw std::invalid_argument("JumpSDEMoments: (a, b) outside triangular table");
  const auto& row = mixed[static_cast<std::size_t>(a)];
  if (b >= static_cast<int>(row.size()))
    throw std::invalid_argument("JumpSDEMoments: missing table entry");
  return row[static_cast<std::size_t>(b)];
}

std::vector<std::vector<double>> jump_moments_from_sde(const JumpSDEMoments& moments, int m_max) {
  if (m_max < 2) throw std::invalid_argument("jump_moments_from_sde: m_max must be >= 2");
  if (moments.order() < m_max)
    throw std::invalid_argument("jump_moments_from_sde: mixed moment table covers order " +
                                std::to_string(moments.order()) + ", need " +
                                std::to_string(m_max));
  std::vector<std::vector<double>> xi;
  xi.reserve(static_cast<std::size_t>(m_max - 1));
  for (int m = 2; m <= m_max; ++m) {
    std::vector<double> row(static_cast<std::size_t>(m + 1));
    for (int i = 0; i <= m; ++i) row[static_cast<std::size_t>(i)] = binomial(m, i) * moments.mu(m - i, i);
    xi.push_back(std::move(row));
  }
  return xi;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
  row[0] = 1.0;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
  return row[static_cast<std::size_t>(k)];
}

namespace {

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw std::invalid_argument(std::string("model: missing or non-numeric field '") + key + "'");
  return j.at(key).get<double>();
}

}  // namespace

PolyModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("model: expected a JSON object");
  PolyModel m;
  m.b0 = require_number(j, "b0");
  m.b1 = require_number(j, "b1");
  m.sigma0 = require_number(j, "sigma0");
  m.sigma1 = require_number(j, "sigma1");
  m.sigma2 = require_number(j, "sigma2");

  if (j.contains("xi")) {
    const auto& xi = j.at("xi");
    if (!xi.is_array()) throw std::invalid_argument("model: 'xi' must be an array of [m, i, value]");
    int m_max = 1;
    for (const auto& entry : xi) {
      if (!entry.is_array() || entry.size() != 3 || !entry[0].is_number_integer() ||
          !entry[1].is_number_integer() || !entry[2].is_number())
        throw std::invalid_argument("model: 'xi' entries must be [m, i, value]");
      const int order = entry[0].get<int>(), i = entry[1].get<int>();
      if (order < 2 || i < 0 || i > order)
        throw std::invalid_argument("model: 'xi' entry has m < 2 or i outside 0..m");
      m_max = std::max(m_max, order);
    }
    if (m_max >= 2) {
      m.xi.assign(static_cast<std::size_t>(m_max - 1), {});
      for (int order = 2; order <= m_max; ++order)
        m.xi[static_cast<std::size_t>(order - 2)].assign(static_cast<std::size_t>(order + 1), 0.0);
      for (const auto& entry : xi)
        m.xi[static_cast<std::size_t>(entry[0].get<int>() - 2)][static_cast<std::size_t>(entry[1].get<int>())] =
            entry[2].get<double>();
    }
  }

  const ValidationReport rep = validate_polynomial(m);
  if (!rep.ok) throw std::invalid_argument("model: " + rep.message);
  return m;
}

nlohmann::json model_to_json(const PolyModel& model) {
  nlohmann::json j{{"b0", model.b0},
                   {"b1", model.b1},
                   {"sigma0", model.sigma0},
                   {"sigma1", model.sigma1},
                   {"sigma2", model.sigma2}};
  if (model.has_jumps()) {
    nlohmann::json xi = nlohmann::json::array();
    for (int m = 2; m <= model.max_jump_order(); ++m)
      for (int i = 0; i <= m; ++i) {
        const double v = model.xi_value(m, i);
        if (v != 0.0) xi.push_back({m, i, v});
      }
    j["xi"] = xi;
  }
  return j;
}

}  // namespace polycorr
