#include "polycorr/correlator.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "polycorr/elimdup.hpp"

namespace polycorr {

void validate_grid(const TimeGrid& grid) {
  if (grid.s.empty()) throw std::invalid_argument("grid: needs at least one observation time");
  if (!std::isfinite(grid.t)) throw std::invalid_argument("grid: t is not finite");
  double prev = grid.t;
  for (double sk : grid.s) {
    if (!std::isfinite(sk)) throw std::invalid_argument("grid: observation time is not finite");
    if (sk <= prev)
      throw std::invalid_argument("grid: times must satisfy t < s_0 < s_1 < ... strictly");
    prev = sk;
  }
}

Vec poly_multiply(const Vec& p, const Vec& q) {
  if (p.size() == 0 || q.size() == 0) throw std::invalid_argument("poly_multiply: empty polynomial");
  Vec out = Vec::Zero(p.size() + q.size() - 1);
  for (Index i = 0; i < p.size(); ++i)
    for (Index k = 0; k < q.size(); ++k) out[i + k] += p[i] * q[k];
  return out;
}

namespace detail {

Mat engine_expm(const PolyModel& model, int n, double dt, const EvalOptions& opts) {
  if (opts.cache)
    return opts.cache->get_or_compute(
        n, dt, [&] { return generator_expm(model, n, dt, opts.policy); });
  return generator_expm(model, n, dt, opts.policy);
}

Vec LiftedMap::apply(const Vec& x) const {
  if (x.size() != dim) throw std::invalid_argument("LiftedMap: vector size mismatch");
  Vec h(static_cast<Index>(egather.size()));
  for (std::size_t i = 0; i < egather.size(); ++i) h[static_cast<Index>(i)] = x[egather[i]];
  const Vec y = core * h;
  Vec out(dim);
  for (std::size_t j = 0; j < dgather.size(); ++j) out[static_cast<Index>(j)] = y[dgather[j]];
  return out;
}

Mat LiftedMap::materialize() const {
  std::vector<Index> colinv(static_cast<std::size_t>(dim), Index{-1});
  for (std::size_t i = 0; i < egather.size(); ++i) colinv[static_cast<std::size_t>(egather[i])] =
      static_cast<Index>(i);
  Mat out = Mat::Zero(dim, dim);
  for (Index c = 0; c < dim; ++c) {
    const Index k = colinv[static_cast<std::size_t>(c)];
    if (k < 0) continue;
    for (Index j = 0; j < dim; ++j) out(j, c) = core(dgather[static_cast<std::size_t>(j)], k);
  }
  return out;
}

LiftedMap lifted_map(int n, int r, Mat core) {
  if (n < 1 || r < 0) throw std::invalid_argument("lifted_map: need n >= 1, r >= 0");
  const int big = n * (r + 1);
  if (core.rows() != big + 1 || core.cols() != big + 1)
    throw std::invalid_argument("lifted_map: core must be (n(r+1)+1) square");

  LiftedMap lm;
  lm.core = std::move(core);
  if (r == 0) {
    lm.dim = n + 1;
    lm.egather.resize(static_cast<std::size_t>(n) + 1);
    lm.dgather.resize(static_cast<std::size_t>(n) + 1);
    for (Index i = 0; i <= n; ++i) {
      lm.egather[static_cast<std::size_t>(i)] = i;
      lm.dgather[static_cast<std::size_t>(i)] = i;
    }
    return lm;
  }
  lm.egather = selection_of(eliminating_matrix_order(n, r));
  lm.dgather = selection_of(duplicating_matrix_order(n, r));
  lm.dim = static_cast<Index>(lm.dgather.size());
  return lm;
}

PaddedSpec pad_spec(const CorrelatorSpec& spec) {
  validate_grid(spec.grid);
  if (!std::isfinite(spec.y)) throw std::invalid_argument("spec: y is not finite");
  const int m = spec.grid.m();
  if (static_cast<int>(spec.polys.size()) != m + 1)
    throw std::invalid_argument("spec: need exactly one polynomial per observation time");

  int n = 1;
  for (const Vec& p : spec.polys) {
    if (p.size() == 0) throw std::invalid_argument("spec: empty polynomial");
    n = std::max(n, static_cast<int>(p.size()) - 1);
  }

  PaddedSpec ps;
  ps.model = spec.model;
  ps.n = n;
  ps.m = m;
  ps.grid = spec.grid;
  ps.y = spec.y;
  ps.polys.reserve(spec.polys.size());
  for (const Vec& p : spec.polys) {
    Vec q = Vec::Zero(n + 1);
    q.head(p.size()) = p;
    ps.polys.push_back(std::move(q));
  }
  return ps;
}

namespace {

// acc has length (n+1)^(r+1); contract the fastest-varying index with p.
RowVec contract_last(const RowVec& acc, const Vec& p) {
  const Index inner = p.size();
  const Index outer = acc.size() / inner;
  RowVec out(outer);
  for (Index b = 0; b < outer; ++b) {
    double s = 0.0;
    for (Index i = 0; i < inner; ++i) s += acc[b * inner + i] * p[i];
    out[b] = s;
  }
  return out;
}

}  // namespace

double chain_eval(const PaddedSpec& ps, const Vec& v0, int gen_insert, const EvalOptions& opts,
                  MatOps ops) {
  const int n = ps.n, m = ps.m;
  if (gen_insert < -1 || gen_insert > m)
    throw std::invalid_argument("chain_eval: insertion index out of range");

  const auto lifted_expm = [&](int r, double dt) {
    return lifted_map(n, r, engine_expm(ps.model, n * (r + 1), dt, opts));
  };
  const auto lifted_gen = [&](int r) {
    return lifted_map(n, r, generator_matrix(ps.model, n * (r + 1)).matrix);
  };

  // first leg: propagate the outer-power vector from t to s_0
  const LiftedMap leg0 = lifted_expm(m, ps.grid.s[0] - ps.grid.t);
  Vec v;
  if (ops == MatOps::dense)
    v = leg0.materialize() * v0;
  else
    v = leg0.apply(v0);
  if (gen_insert == 0) {
    const LiftedMap g0 = lifted_gen(m);
    v = ops == MatOps::dense ? Vec(g0.materialize() * v) : g0.apply(v);
  }

  // p_m^T vec^{-1}(v): rows of the reshape pair with p_m
  const Index cols = v.size() / (n + 1);
  RowVec acc = ps.polys[static_cast<std::size_t>(m)].transpose() *
               vec_inverse(v, n + 1, cols);

  for (int k = 1; k <= m; ++k) {
    const int r = m - k;
    const double dt = ps.grid.s[static_cast<std::size_t>(k)] - ps.grid.s[static_cast<std::size_t>(k - 1)];
    Vec col = acc.transpose();
    if (gen_insert == k) {
      const LiftedMap gk = lifted_gen(r);
      col = ops == MatOps::dense ? Vec(gk.materialize() * col) : gk.apply(col);
    }
    const LiftedMap leg = lifted_expm(r, dt);
    col = ops == MatOps::dense ? Vec(leg.materialize() * col) : leg.apply(col);
    acc = contract_last(col.transpose(), ps.polys[static_cast<std::size_t>(r)]);
  }

  return acc[0];
}

}  // namespace detail

double moment(const PolyModel& model, const Vec& p, double t, double T, double y,
              const EvalOptions& opts) {
  if (p.size() == 0) throw std::invalid_argument("moment: empty polynomial");
  if (!(t <= T)) throw std::invalid_argument("moment: requires t <= T");
  const int n = std::max<int>(1, static_cast<int>(p.size()) - 1);
  Vec q = Vec::Zero(n + 1);
  q.head(p.size()) = p;
  const Mat e = detail::engine_expm(model, n, T - t, opts);
  return q.dot(e * monomial_basis(y, n));
}

Mat tilde_g(const PolyModel& model, int n, int r) {
  return detail::lifted_map(n, r, generator_matrix(model, n * (r + 1)).matrix).materialize();
}

Mat tilde_g_expm(const PolyModel& model, int n, int r, double dt, const EvalOptions& opts) {
  return detail::lifted_map(n, r, detail::engine_expm(model, n * (r + 1), dt, opts)).materialize();
}

double correlator2(const PolyModel& model, const Vec& p0, const Vec& p1, const TimeGrid& grid,
                   double y, const EvalOptions& opts) {
  validate_grid(grid);
  if (grid.m() != 1) throw std::invalid_argument("correlator2: grid must hold exactly two times");
  const int n = std::max<int>(
      1, static_cast<int>(std::max(p0.size(), p1.size())) - 1);
  Vec q0 = Vec::Zero(n + 1), q1 = Vec::Zero(n + 1);
  q0.head(p0.size()) = p0;
  q1.head(p1.size()) = p1;

  const Mat e_big = detail::engine_expm(model, 2 * n, grid.s[0] - grid.t, opts);
  const Vec reduced = sparse_apply(eliminating_matrix(n + 1, n + 1), vec(x_matrix(y, n, 1)));
  const Vec rebuilt = sparse_apply(duplicating_matrix(n + 1, n + 1), Vec(e_big * reduced));
  const Mat inner = vec_inverse(rebuilt, n + 1, n + 1);

  const Mat e_small = detail::engine_expm(model, n, grid.s[1] - grid.s[0], opts);
  return q1.dot(inner * (e_small.transpose() * q0));
}

double correlator(const CorrelatorSpec& spec, const EvalOptions& opts, MatOps ops) {
  const detail::PaddedSpec ps = detail::pad_spec(spec);
  return detail::chain_eval(ps, vec_x_matrix(ps.y, ps.n, ps.m), -1, opts, ops);
}

double correlator_iterated(const CorrelatorSpec& spec, const EvalOptions& opts, MatOps ops) {
  const detail::PaddedSpec ps = detail::pad_spec(spec);
  const int n = ps.n, m = ps.m;

  const auto propagate = [&](const Vec& q, double dt) {
    const int deg = static_cast<int>(q.size()) - 1;
    const Mat e = detail::engine_expm(ps.model, deg, dt, opts);
    if (ops == MatOps::dense) return Vec(e.transpose() * q);
    // triplet walk over the nonzeros of e
    Vec out = Vec::Zero(q.size());
    for (Index i = 0; i < e.rows(); ++i)
      for (Index j = 0; j < e.cols(); ++j)
        if (e(i, j) != 0.0) out[j] += e(i, j) * q[i];
    return out;
  };

  Vec q = ps.polys[0];
  for (int j = 1; j <= m; ++j) {
    const double dt = ps.grid.s[static_cast<std::size_t>(m - j + 1)] -
                      ps.grid.s[static_cast<std::size_t>(m - j)];
    q = propagate(q, dt);
    q = poly_multiply(ps.polys[static_cast<std::size_t>(j)], q);
  }
  q = propagate(q, ps.grid.s[0] - ps.grid.t);
  return q.dot(monomial_basis(ps.y, static_cast<int>(q.size()) - 1));
}

CorrelatorSpec correlator_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("spec: expected a JSON object");
  for (const char* key : {"model", "polys", "t", "s", "y"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("spec: missing field '") + key + "'");

  CorrelatorSpec spec;
  spec.model = model_from_json(j.at("model"));
  if (!j.at("t").is_number() || !j.at("y").is_number())
    throw std::invalid_argument("spec: 't' and 'y' must be numbers");
  spec.grid.t = j.at("t").get<double>();
  spec.y = j.at("y").get<double>();

  if (!j.at("s").is_array() || j.at("s").empty())
    throw std::invalid_argument("spec: 's' must be a non-empty array (the time grid)");
  for (const auto& v : j.at("s")) {
    if (!v.is_number()) throw std::invalid_argument("spec: grid times must be numbers");
    spec.grid.s.push_back(v.get<double>());
  }

  if (!j.at("polys").is_array() || j.at("polys").empty())
    throw std::invalid_argument("spec: 'polys' must be a non-empty array of coefficient arrays");
  for (const auto& pj : j.at("polys")) {
    if (!pj.is_array() || pj.empty())
      throw std::invalid_argument("spec: each polynomial is a non-empty coefficient array");
    Vec p(static_cast<Index>(pj.size()));
    Index i = 0;
    for (const auto& c : pj) {
      if (!c.is_number()) throw std::invalid_argument("spec: polynomial coefficients must be numbers");
      p[i++] = c.get<double>();
    }
    spec.polys.push_back(std::move(p));
  }
  return spec;
}

nlohmann::json correlator_spec_to_json(const CorrelatorSpec& spec) {
  nlohmann::json polys = nlohmann::json::array();
  for (const Vec& p : spec.polys) {
    nlohmann::json pj = nlohmann::json::array();
    for (Index i = 0; i < p.size(); ++i) pj.push_back(p[i]);
    polys.push_back(std::move(pj));
  }
  return nlohmann::json{{"model", model_to_json(spec.model)},
                        {"polys", polys},
                        {"t", spec.grid.t},
                        {"s", spec.grid.s},
                        {"y", spec.y}};
}

}  // namespace polycorr
