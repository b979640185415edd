#ifndef SYMBRANCH_NONSPATIAL_HPP
#define SYMBRANCH_NONSPATIAL_HPP

#include <span>
#include <utility>
#include <vector>

#include "symbranch/params.hpp"
#include "symbranch/rng.hpp"

namespace sbm {

// State of the nonspatial pair du = sqrt(kappa u v) dB1, dv = sqrt(kappa u v) dB2.
// Both coordinates freeze once the pair is absorbed on the quadrant boundary.
struct PairState {
  double u = 0.0;
  double v = 0.0;
  double t = 0.0;
  bool absorbed = false;
};

// One Euler-Maruyama step with full truncation inside the square root and
// clamp-and-freeze on boundary crossing: if either coordinate lands at or
// below 0 the pair is clamped to (u' v 0, v' v 0) and frozen. Absorbed
// states only advance their clock.
PairState step_pair(const PairState& state, const ModelParams& params, double dt,
                    RngStream& rng);

// States at the requested checkpoints (sorted, within [0, T]); an empty
// checkpoint list yields the state at T only. Stepping stops early once
// absorbed; later checkpoints repeat the frozen state with advanced clock.
std::vector<PairState> simulate_pair_path(double u0, double v0, const ModelParams& params,
                                          double T, double dt,
                                          std::span<const double> checkpoints, RngStream& rng);

// Densely retained path (state after every step, including the initial one)
// for time-change diagnostics.
struct PairPath {
  std::vector<PairState> states;
};
PairPath simulate_pair_dense(double u0, double v0, const ModelParams& params, double T,
                             double dt, RngStream& rng);

// Running kappa * int_0^t u_s v_s ds along a dense path, by the trapezoid
// rule; constant after absorption. Returned as (t, value) per retained state.
// The final value is the empirical time change T^{-1}(t), which converges to
// the quadrant exit time of the associated correlated Brownian pair.
std::vector<std::pair<double, double>> time_change_accumulator(const PairPath& path,
                                                               const ModelParams& params);

// Closed-form mixed moments for unit starts (u0 = v0 = 1), used as oracles:
//   E[u_t v_t]   = exp(rho kappa t)
//   E[u_t^2]     = 1 + (exp(rho kappa t) - 1)/rho   (1 + kappa t at rho = 0)
double moment_uv_closed_form(const ModelParams& params, double t);
double moment_u2_closed_form(const ModelParams& params, double t);

}  // namespace sbm

#endif
