#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "polycorr/correlator.hpp"
#include "polycorr/model.hpp"

namespace polycorr {

// Gaussian Ornstein-Uhlenbeck dynamics dY = (b0 + b1 Y) dt + sqrt(sigma0) dW.
struct OUParams {
  double b0{0.0};
  double b1{0.0};
  double sigma0{0.0};
  double y0{0.0};
};

// Throws unless the model is a pure OU diffusion (sigma1 = sigma2 = 0, no jumps,
// sigma0 >= 0).
OUParams ou_params_from_model(const PolyModel& model, double y0);
PolyModel ou_to_model(const OUParams& p);

// Exact conditional (mean, variance) of Y(t + dt) given Y(t) = y_prev.
// Continuous limits at b1 = 0: mean = y_prev + b0 dt, variance = sigma0 dt.
std::pair<double, double> ou_step_moments(const OUParams& p, double y_prev, double dt);

// k-th output of the splitmix64 sequence started at `base`; used to hand each
// repetition its own decorrelated engine seed.
std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream);

// Normal draws via Box-Muller on top of mt19937_64. std::normal_distribution
// is implementation-defined, so results would not reproduce across standard
// libraries; this sampler pins the exact draw sequence.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed);

  double uniform();  // [0, 1)
  double normal();   // standard normal

 private:
  std::mt19937_64 eng_;
  double spare_{0.0};
  bool has_spare_{false};
};

// Exact-transition simulation of Y at the grid observation times s_0..s_m,
// started from p.y0 at grid.t. Same seed, same path.
std::vector<double> simulate_ou_path(const OUParams& p, const TimeGrid& grid,
                                     std::uint64_t seed);

struct MCResult {
  double estimate{0.0};           // mean of the repetition estimates
  double std_error{0.0};          // sample std dev of repetitions / sqrt(reps)
  std::vector<double> repetitions;
  double worst_rel_err{0.0};      // max_r |rep_r - reference| / |reference|
  int failures{0};                // repetitions with relative error > tol
};

// Monte Carlo estimate of E[prod_j Y(s_j)^powers_j | Y(t) = y0] from `reps`
// independent batches of `n_paths` paths, compared against a nonzero closed
// form `reference`. Fully deterministic given `seed`.
MCResult mc_correlator(const OUParams& p, const std::vector<int>& powers, const TimeGrid& grid,
                       int n_paths, int reps, double reference, double tol, std::uint64_t seed);

// Closed-form E[prod_j Y(s_j)^powers_j | Y(t) = y0] for the Gaussian OU
// process via mean shifts and Wick pairings; total power capped at 12.
double gaussian_ou_oracle(const OUParams& p, const std::vector<int>& powers,
                          const TimeGrid& grid);

}  // namespace polycorr
