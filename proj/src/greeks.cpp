#include "polycorr/greeks.hpp"

#include <stdexcept>

namespace polycorr {

Mat dx_dy(double y, int n, int m) {
  if (n < 1 || m < 0) throw std::invalid_argument("dx_dy: need n >= 1, m >= 0");
  const Vec pow = power_table(y, n);
  Vec h(n + 1), dh(n + 1);
  for (int k = 0; k <= n; ++k) {
    h[k] = pow[k];
    dh[k] = k == 0 ? 0.0 : k * pow[k - 1];
  }
  Mat dx = dh;  // (n+1) x 1, order 0
  if (m == 0) return dx;
  Mat x = h;
  for (int r = 1; r <= m; ++r) {
    dx = kron(dh.transpose(), x) + kron(h.transpose(), dx);
    if (r < m) x = kron(h.transpose(), x);
  }
  return dx;
}

double delta(const CorrelatorSpec& spec, const EvalOptions& opts) {
  const detail::PaddedSpec ps = detail::pad_spec(spec);
  return detail::chain_eval(ps, vec(dx_dy(ps.y, ps.n, ps.m)), -1, opts, MatOps::sparse);
}

double theta(const CorrelatorSpec& spec, int j, const EvalOptions& opts) {
  const detail::PaddedSpec ps = detail::pad_spec(spec);
  if (j < 0 || j > ps.m) throw std::invalid_argument("theta: time index out of range");
  const Vec v0 = vec_x_matrix(ps.y, ps.n, ps.m);
  const double lead = detail::chain_eval(ps, v0, j, opts, MatOps::sparse);
  if (j == ps.m) return lead;
  return lead - detail::chain_eval(ps, v0, j + 1, opts, MatOps::sparse);
}

GreekReport greeks(const CorrelatorSpec& spec, const EvalOptions& opts) {
  const detail::PaddedSpec ps = detail::pad_spec(spec);
  const Vec v0 = vec_x_matrix(ps.y, ps.n, ps.m);

  GreekReport rep;
  rep.value = detail::chain_eval(ps, v0, -1, opts, MatOps::sparse);
  rep.delta = detail::chain_eval(ps, vec(dx_dy(ps.y, ps.n, ps.m)), -1, opts, MatOps::sparse);

  std::vector<double> chains(static_cast<std::size_t>(ps.m) + 1);
  for (int q = 0; q <= ps.m; ++q)
    chains[static_cast<std::size_t>(q)] = detail::chain_eval(ps, v0, q, opts, MatOps::sparse);
  rep.thetas.resize(static_cast<std::size_t>(ps.m) + 1);
  for (int q = 0; q <= ps.m; ++q)
    rep.thetas[static_cast<std::size_t>(q)] =
        chains[static_cast<std::size_t>(q)] - (q < ps.m ? chains[static_cast<std::size_t>(q) + 1] : 0.0);
  return rep;
}

}  // namespace polycorr
