#pragma once

#include <vector>

#include <json.hpp>

#include "polycorr/generator.hpp"
#include "polycorr/linalg.hpp"
#include "polycorr/model.hpp"

namespace polycorr {

// Observation times t < s_0 < s_1 < ... < s_m.
struct TimeGrid {
  double t{0.0};
  std::vector<double> s;

  int m() const { return static_cast<int>(s.size()) - 1; }
};

// Throws std::invalid_argument mentioning "grid" when the times are not
// finite and strictly increasing with t < s_0.
void validate_grid(const TimeGrid& grid);

// Cross-moment specification
//
//   E[ p_m(Y(s_0)) p_{m-1}(Y(s_1)) ... p_0(Y(s_m)) | Y(t) = y ],
//
// i.e. polys[k] is evaluated at s_{m-k}: the last listed polynomial applies
// at the earliest observation. Coefficient vectors may have any positive
// length; the engine pads everything to the common degree n = max(1, deg).
struct CorrelatorSpec {
  PolyModel model;
  std::vector<Vec> polys;
  TimeGrid grid;
  double y{0.0};
};

struct EvalOptions {
  ExpmPolicy policy{ExpmPolicy::recursive_with_fallback};
  ExpmCache* cache{nullptr};  // optional memo bound to this model and policy
};

// Operator representation. The lifted generators and their exponentials are
// D^(r) * core * E^(r) sandwiches; `sparse` applies the selections as index
// gathers around a small dense core, `dense` materializes the full
// (n+1)^(r+1) square matrix first (only viable for small r).
enum class MatOps { sparse, dense };

// Coefficient convolution: (p*q)_j = sum_{k+i=j} p_i q_k.
Vec poly_multiply(const Vec& p, const Vec& q);

// E[p(Y(T)) | Y(t) = y] = pvec^T e^{G_n (T-t)} H_n(y) with n = max(1, deg p).
// Requires t <= T.
double moment(const PolyModel& model, const Vec& p, double t, double T, double y,
              const EvalOptions& opts = {});

// Lifted generator acting on vec(X_n^(r)):  D^(r) G_{n(r+1)} E^(r).
// Never exponentiate this matrix directly; exponentials transport through the
// same sandwich, which is what tilde_g_expm computes.
Mat tilde_g(const PolyModel& model, int n, int r);
Mat tilde_g_expm(const PolyModel& model, int n, int r, double dt, const EvalOptions& opts = {});

// Two-point correlator E[p_1(Y(s_0)) p_0(Y(s_1)) | Y(t) = y] in its direct
// duplication/elimination form.
double correlator2(const PolyModel& model, const Vec& p0, const Vec& p1, const TimeGrid& grid,
                   double y, const EvalOptions& opts = {});

// General correlator by the closed matrix formula: one exponential per time
// gap, accumulated left to right as a shrinking row vector.
double correlator(const CorrelatorSpec& spec, const EvalOptions& opts = {},
                  MatOps ops = MatOps::sparse);

// Same value by backward iteration of the single-step moment formula with
// polynomial coefficient products. `ops` selects dense Eigen products or a
// triplet-walk over the exponentials' nonzeros.
double correlator_iterated(const CorrelatorSpec& spec, const EvalOptions& opts = {},
                           MatOps ops = MatOps::dense);

// Wire format:
//   {"model": {...}, "polys": [[c0, c1, ...], ...], "t": ., "s": [...], "y": .}
CorrelatorSpec correlator_spec_from_json(const nlohmann::json& j);
nlohmann::json correlator_spec_to_json(const CorrelatorSpec& spec);

namespace detail {

// D^(r) * core * E^(r) with the selections precomputed as index maps.
struct LiftedMap {
  Index dim{0};                 // (n+1)^(r+1)
  std::vector<Index> egather;   // row i of E^(r) reads source index egather[i]
  std::vector<Index> dgather;   // row j of D^(r) reads core-result row dgather[j]
  Mat core;                     // (N+1) x (N+1), N = n(r+1)

  Vec apply(const Vec& x) const;
  Mat materialize() const;
};

LiftedMap lifted_map(int n, int r, Mat core);

struct PaddedSpec {
  PolyModel model;
  int n{1};
  int m{0};
  std::vector<Vec> polys;  // all of size n+1
  TimeGrid grid;
  double y{0.0};
};

PaddedSpec pad_spec(const CorrelatorSpec& spec);

// Shared chain evaluator. v0 is the initial column of length (n+1)^(m+1)
// (vec of the monomial outer-power matrix for plain correlators, its
// y-derivative for delta). gen_insert = -1 evaluates the plain chain; 0
// applies the order-m lifted generator right after the first exponential;
// k in 1..m applies the order-(m-k) lifted generator entering factor k.
// Those insertions are exactly the terms time derivatives are made of.
double chain_eval(const PaddedSpec& ps, const Vec& v0, int gen_insert, const EvalOptions& opts,
                  MatOps ops);

Mat engine_expm(const PolyModel& model, int n, double dt, const EvalOptions& opts);

}  // namespace detail

}  // namespace polycorr
