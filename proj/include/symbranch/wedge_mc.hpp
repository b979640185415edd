#ifndef SYMBRANCH_WEDGE_MC_HPP
#define SYMBRANCH_WEDGE_MC_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "symbranch/rng.hpp"
#include "symbranch/stats.hpp"
#include "symbranch/wedge.hpp"

namespace sbm {

// One sampled exit of the correlated Brownian pair from the open quadrant.
// Exactly one exit coordinate is zero; axis = x means the second coordinate
// hit zero (the exit lies on the x-axis).
struct ExitSample {
  double exit_time = 0.0;
  double x = 0.0;
  double y = 0.0;
  Axis axis = Axis::x;
};

// Raised when a path exhausts its step budget before exiting (heavy-tailed
// exit times near rho -> 1); carries the partial state.
struct StepBudgetError : std::runtime_error {
  double t;
  double x;
  double y;
  StepBudgetError(double t_, double x_, double y_)
      : std::runtime_error("simulate_exit: step budget exceeded"), t(t_), x(x_), y(y_) {}
};

// Discrete-time exact-increment walk until a coordinate first reaches <= 0;
// exit time and point by linear interpolation within the crossing step (the
// coordinate crossing earlier under the interpolation wins; the other one is
// evaluated at the crossing time and clamped at 0).
ExitSample simulate_exit(double u, double v, double rho, double dt, RngStream& rng,
                         std::uint64_t max_steps = 1'000'000'000ull);

struct ExitEnsemble {
  std::vector<ExitSample> samples;  // included samples, in replica order
  std::size_t n_requested = 0;
  std::size_t n_budget_exceeded = 0;

  double p_axis_x = 0.0;           // empirical exit-on-x-axis probability
  double p_axis_x_se = 0.0;
  EnsembleSummary mean_b1;         // empirical E[B1_tau] (0 on y-axis exits)
  EnsembleSummary mean_b2;
  EnsembleSummary mean_exit_time;
  bool exit_time_infinite_suspect = false;

  std::vector<double> x_axis_points;  // sorted B1 on x-axis exits
  std::vector<double> y_axis_points;  // sorted B2 on y-axis exits
};

// Independent samples with per-sample streams (seed, stream_base + i).
// Budget-exceeded paths are counted and excluded. The infinite-suspect flag
// is raised when the running mean of the exit time fails to stabilize and
// the critical order p(rho) is <= 2.
ExitEnsemble ensemble_exit(double u, double v, double rho, double dt, std::size_t n_samples,
                           std::uint64_t seed, std::uint64_t stream_base = 0,
                           std::uint64_t max_steps = 1'000'000'000ull);

}  // namespace sbm

#endif
