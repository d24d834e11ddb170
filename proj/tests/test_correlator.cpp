#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <random>

#include "helpers.hpp"
#include "polycorr/correlator.hpp"
#include "polycorr/elimdup.hpp"
#include "polycorr/generator.hpp"
#include "polycorr/sparse.hpp"

using namespace polycorr;

namespace {

PolyModel ou_reference() {
  PolyModel m;
  m.b0 = 0.75;
  m.b1 = -5.0;
  m.sigma0 = 0.01;
  return m;
}

CorrelatorSpec make_spec(const PolyModel& model, std::vector<Vec> polys, double t,
                         std::vector<double> s, double y) {
  CorrelatorSpec spec;
  spec.model = model;
  spec.polys = std::move(polys);
  spec.grid = TimeGrid{t, std::move(s)};
  spec.y = y;
  return spec;
}

// stationary OU first and second conditional moments at horizon dt
double ou_second_moment(double dt) {
  const double var = 0.01 * (-std::expm1(-10.0 * dt)) / 10.0;
  return 0.15 * 0.15 + var;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(validate_grid(TimeGrid{0.0, {}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_grid(TimeGrid{1.0, {1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_grid(TimeGrid{0.0, {1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_grid(TimeGrid{0.0, {2.0, 1.0}}), std::invalid_argument);
  CHECK_NOTHROW(validate_grid(TimeGrid{0.0, {1.0, 1.0 + 1e-12}}));
  CHECK(TimeGrid{0.0, {1.0, 2.0, 3.0}}.m() == 2);
}

TEST_CASE("single-date correlator is the moment formula") {
  const PolyModel model = ou_reference();
  SUBCASE("first moment of the stationary start is the long-run mean") {
    const auto spec = make_spec(model, {testutil::monomial(1)}, 0.0, {1.0}, 0.15);
    CHECK(correlator(spec) == doctest::Approx(0.15).epsilon(1e-13));
    CHECK(moment(model, testutil::monomial(1), 0.0, 1.0, 0.15) ==
          doctest::Approx(0.15).epsilon(1e-13));
  }
  SUBCASE("second moment matches mean^2 + variance in closed form") {
    const auto spec = make_spec(model, {testutil::monomial(2)}, 0.0, {1.0}, 0.15);
    const double value = correlator(spec);
    CHECK(value == doctest::Approx(ou_second_moment(1.0)).epsilon(1e-13));
    CHECK(std::abs(value - 2.350e-02) / 2.350e-02 < 5e-4);
  }
  SUBCASE("moment at a zero horizon evaluates the polynomial") {
    Vec p(3);
    p << 0.2, -1.0, 0.4;
    CHECK(moment(model, p, 1.0, 1.0, 0.3) ==
          doctest::Approx(testutil::eval_poly(p, 0.3)).epsilon(1e-15));
  }
}

TEST_CASE("two-point product of the stationary OU in closed form") {
  const PolyModel model = ou_reference();
  // E[Y(1) Y(1.5)] = mean^2 + Var(Y(1)) e^{b1 * 0.5}
  const double expected =
      0.0225 + 0.01 * (-std::expm1(-10.0)) / 10.0 * std::exp(-2.5);
  const auto spec = make_spec(model, {testutil::monomial(1), testutil::monomial(1)}, 0.0,
                              {1.0, 1.5}, 0.15);
  const double value = correlator(spec);
  CHECK(value == doctest::Approx(expected).epsilon(1e-13));
  CHECK(std::abs(value - 2.258e-02) / 2.258e-02 < 5e-4);

  const double via2 = correlator2(model, testutil::monomial(1), testutil::monomial(1),
                                  spec.grid, 0.15);
  CHECK(via2 == doctest::Approx(value).epsilon(1e-14));
}

TEST_CASE("correlator2 on constants multiplies them") {
  Vec c0(1), c1(1);
  c0 << 3.0;
  c1 << -0.5;
  const double v = correlator2(ou_reference(), c0, c1, TimeGrid{0.0, {1.0, 2.0}}, 0.15);
  CHECK(v == doctest::Approx(-1.5).epsilon(1e-15));
}

TEST_CASE("two-point correlator agrees between the direct and lifted paths") {
  std::mt19937_64 rng(301);
  for (int trial = 0; trial < 8; ++trial) {
    const PolyModel model = testutil::random_diffusion(rng);
    Vec p0(3), p1(2);
    for (Index i = 0; i < 3; ++i) p0[i] = testutil::uniform(rng, -1, 1);
    for (Index i = 0; i < 2; ++i) p1[i] = testutil::uniform(rng, -1, 1);
    const TimeGrid grid{0.1, {0.6, 1.4}};
    const double y = testutil::uniform(rng, 0.2, 1.0);
    const double direct = correlator2(model, p0, p1, grid, y);
    const double lifted = correlator(make_spec(model, {p0, p1}, grid.t, grid.s, y));
    CHECK(direct == doctest::Approx(lifted).epsilon(1e-13));
  }
}

TEST_CASE("polynomial ordering: last listed polynomial applies at the earliest date") {
  // asymmetric check against the deterministic flow: polys[0] = x^2 must hit
  // the late date, polys[1] = x the early one
  PolyModel det;
  det.b0 = 0.4;
  det.b1 = -1.3;
  const auto spec = make_spec(det, {testutil::monomial(2), testutil::monomial(1)}, 0.0,
                              {0.5, 1.25}, 0.8);
  const double y0 = testutil::ode_flow(det.b0, det.b1, 0.8, 0.5);
  const double y1 = testutil::ode_flow(det.b0, det.b1, 0.8, 1.25);
  CHECK(correlator(spec) == doctest::Approx(y0 * y1 * y1).epsilon(1e-12));
  CHECK(testutil::deterministic_correlator(spec) ==
        doctest::Approx(y0 * y1 * y1).epsilon(1e-12));
}

TEST_CASE("deterministic models reduce to products along the ODE flow") {
  std::mt19937_64 rng(302);
  for (int trial = 0; trial < 6; ++trial) {
    PolyModel det;
    det.b0 = testutil::uniform(rng, 0.1, 1.0);
    det.b1 = testutil::uniform(rng, -2.0, -0.3);
    std::vector<Vec> polys;
    const int m = static_cast<int>(rng() % 3);
    for (int k = 0; k <= m; ++k) {
      Vec p(static_cast<Index>(rng() % 3) + 2);
      for (Index i = 0; i < p.size(); ++i) p[i] = testutil::uniform(rng, 0.2, 1.0);
      polys.push_back(p);
    }
    std::vector<double> s;
    double time = 0.3;
    for (int k = 0; k <= m; ++k) s.push_back(time += testutil::uniform(rng, 0.2, 0.8));
    const auto spec = make_spec(det, polys, 0.0, s, testutil::uniform(rng, 0.3, 1.0));
    const double expected = testutil::deterministic_correlator(spec);
    CHECK(correlator(spec) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("lifted generator for n=1, r=1 duplicates the cross row") {
  PolyModel m;
  m.b0 = 0.3;
  m.b1 = -1.1;
  m.sigma0 = 0.2;
  m.sigma1 = 0.05;
  m.sigma2 = 0.1;
  m.xi = {{0.4, 0.25, 0.15}};
  const Mat tg = tilde_g(m, 1, 1);
  REQUIRE(tg.rows() == 4);
  Mat expected(4, 4);
  expected << 0, 0, 0, 0,
      m.b0, m.b1, 0, 0,
      m.b0, m.b1, 0, 0,
      m.sigma0 + 0.4, 2 * m.b0 + m.sigma1 + 0.25, 0, 2 * m.b1 + m.sigma2 + 0.15;
  CHECK(testutil::max_abs_diff(tg, expected) == 0.0);
  // rows 1 and 2 coincide: the lifted operator is not itself a generator matrix
  CHECK(testutil::exact_equal(tg.row(1), tg.row(2)));
}

TEST_CASE("lifted exponential at dt = 0 is the Hankel projector, not the identity") {
  const PolyModel m = ou_reference();
  const Mat e0 = tilde_g_expm(m, 2, 1, 0.0);
  const Mat de = sparse_to_dense(
      sparse_multiply(duplicating_matrix_order(2, 1), eliminating_matrix_order(2, 1)));
  CHECK(testutil::exact_equal(e0, de));
  CHECK(testutil::max_abs_diff(e0, Mat::Identity(9, 9)) > 0.5);
}

TEST_CASE("lifted exponentials compose as a semigroup") {
  const PolyModel m = ou_reference();
  const Mat a = tilde_g_expm(m, 2, 1, 0.3);
  const Mat b = tilde_g_expm(m, 2, 1, 0.9);
  const Mat c = tilde_g_expm(m, 2, 1, 1.2);
  CHECK(testutil::max_abs_diff(Mat(a * b), c) < 1e-10);
}

TEST_CASE("lifted generator action routes through the tall generator") {
  std::mt19937_64 rng(303);
  const PolyModel m = testutil::random_jump_model(rng, 6);
  const int n = 2, r = 2;
  const double x = 0.37;
  const GeneratorMatrix tall = generator_matrix(m, n * (r + 1));
  const Vec via_tall = sparse_apply(duplicating_matrix_order(n, r),
                                    Vec(tall.matrix * monomial_basis(x, n * (r + 1))));
  const Vec via_tilde = tilde_g(m, n, r) * vec_x_matrix(x, n, r);
  CHECK(testutil::max_abs_diff(via_tilde, via_tall) < 1e-13);

  // the detail map applies the same three steps without materializing
  const auto lifted = detail::lifted_map(n, r, tall.matrix);
  CHECK(testutil::exact_equal(lifted.apply(vec_x_matrix(x, n, r)), via_tall));
}

TEST_CASE("formula and iterated evaluation produce the same values") {
  std::mt19937_64 rng(304);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = static_cast<int>(rng() % 4);
    const int maxdeg = 1 + static_cast<int>(rng() % 3);
    const PolyModel model = (trial % 3 == 0) ? testutil::random_jump_model(rng, maxdeg * (m + 1))
                                             : testutil::random_diffusion(rng);
    std::vector<Vec> polys;
    for (int k = 0; k <= m; ++k) {
      Vec p(maxdeg + 1);
      for (Index i = 0; i < p.size(); ++i) p[i] = testutil::uniform(rng, 0.1, 1.0);
      polys.push_back(p);
    }
    std::vector<double> s;
    double time = 0.2;
    for (int k = 0; k <= m; ++k) s.push_back(time += testutil::uniform(rng, 0.3, 0.9));
    const auto spec = make_spec(model, polys, 0.0, s, testutil::uniform(rng, 0.2, 0.9));
    const double a = correlator(spec);
    const double b = correlator_iterated(spec);
    CHECK(testutil::close_rel(a, b, 1e-12));
  }
}

TEST_CASE("sparse and dense operator representations agree") {
  const PolyModel model = ou_reference();
  const auto spec = make_spec(
      model, {testutil::monomial(2), testutil::monomial(1), testutil::monomial(2)}, 0.0,
      {1.0, 1.5, 2.0}, 0.15);
  const double s1 = correlator(spec, {}, MatOps::sparse);
  const double d1 = correlator(spec, {}, MatOps::dense);
  CHECK(testutil::close_rel(s1, d1, 1e-13));
  const double s2 = correlator_iterated(spec, {}, MatOps::sparse);
  const double d2 = correlator_iterated(spec, {}, MatOps::dense);
  CHECK(testutil::close_rel(s2, d2, 1e-13));
  CHECK(testutil::close_rel(s1, s2, 1e-12));
}

TEST_CASE("collapsing the gap between dates converges to the merged product") {
  const PolyModel model = ou_reference();
  Vec p0(2), p1(3);
  p0 << 0.1, 1.0;
  p1 << 0.0, 0.5, 0.5;
  const auto tight =
      make_spec(model, {p0, p1}, 0.0, {1.0, 1.0 + 1e-8}, 0.15);
  const auto merged = make_spec(model, {poly_multiply(p0, p1)}, 0.0, {1.0}, 0.15);
  CHECK(testutil::close_rel(correlator(tight), correlator(merged), 1e-6));
}

TEST_CASE("time-homogeneity: shifting every time leaves the value unchanged") {
  std::mt19937_64 rng(305);
  const PolyModel model = testutil::random_diffusion(rng);
  const auto base = make_spec(model, {testutil::monomial(2), testutil::monomial(1)}, 0.4,
                              {1.0, 1.7}, 0.6);
  auto shifted = base;
  const double delta = 0.37;
  shifted.grid.t += delta;
  for (double& s : shifted.grid.s) s += delta;
  CHECK(testutil::close_rel(correlator(base), correlator(shifted), 1e-12));
}

TEST_CASE("strict exponential policy propagates through evaluation") {
  PolyModel bm;
  bm.sigma0 = 0.5;  // c_2 = 0 breaks the recursion conditions
  const auto spec = make_spec(bm, {testutil::monomial(2)}, 0.0, {0.8}, 0.3);
  EvalOptions strict;
  strict.policy = ExpmPolicy::recursive_strict;
  CHECK_THROWS_AS(correlator(spec, strict), RecursionConditionError);
  EvalOptions fallback;
  fallback.policy = ExpmPolicy::recursive_with_fallback;
  CHECK(correlator(spec, fallback) == doctest::Approx(0.3 * 0.3 + 0.5 * 0.8).epsilon(1e-13));
}

TEST_CASE("a shared exponential cache is reused across evaluations") {
  const PolyModel model = ou_reference();
  const auto spec = make_spec(model, {testutil::monomial(1), testutil::monomial(1)}, 0.0,
                              {1.0, 1.5}, 0.15);
  ExpmCache cache;
  EvalOptions opts;
  opts.cache = &cache;
  const double first = correlator(spec, opts);
  const std::size_t entries = cache.size();
  CHECK(entries > 0);
  const double second = correlator(spec, opts);
  CHECK(cache.size() == entries);
  CHECK(first == second);
}

TEST_CASE("spec JSON parsing round-trips and rejects malformed input") {
  const auto spec = make_spec(ou_reference(), {testutil::monomial(2), testutil::monomial(1)}, 0.0,
                              {1.0, 1.5}, 0.15);
  const CorrelatorSpec back = correlator_spec_from_json(correlator_spec_to_json(spec));
  CHECK(back.grid.t == spec.grid.t);
  CHECK(back.grid.s == spec.grid.s);
  CHECK(back.y == spec.y);
  REQUIRE(back.polys.size() == 2);
  CHECK(testutil::exact_equal(back.polys[0], spec.polys[0]));
  CHECK(testutil::exact_equal(back.polys[1], spec.polys[1]));
  CHECK(correlator(back) == correlator(spec));

  auto j = correlator_spec_to_json(spec);
  j.erase("polys");
  CHECK_THROWS_AS(correlator_spec_from_json(j), std::invalid_argument);
}

TEST_CASE("spec with mismatched polynomial count is rejected") {
  auto spec = make_spec(ou_reference(), {testutil::monomial(1)}, 0.0, {1.0, 1.5}, 0.15);
  CHECK_THROWS_AS(correlator(spec), std::invalid_argument);
  CHECK_THROWS_AS(correlator_iterated(spec), std::invalid_argument);
}
