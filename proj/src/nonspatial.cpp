#include "symbranch/nonspatial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbm {

PairState step_pair(const PairState& state, const ModelParams& params, double dt,
                    RngStream& rng) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_pair: dt must be positive");
  PairState next = state;
  next.t = state.t + dt;
  if (state.absorbed) return next;

  const double sigma = std::sqrt(params.kappa * std::max(state.u, 0.0) * std::max(state.v, 0.0));
  if (sigma == 0.0) {
    next.absorbed = true;
    return next;
  }
  const IncrementPair dw = correlated_pair_increment(params.rho, dt, rng);
  const double u1 = state.u + sigma * dw.dw1;
  const double v1 = state.v + sigma * dw.dw2;
  if (u1 <= 0.0 || v1 <= 0.0) {
    next.u = std::max(u1, 0.0);
    next.v = std::max(v1, 0.0);
    next.absorbed = true;
  } else {
    next.u = u1;
    next.v = v1;
  }
  return next;
}

namespace {

void validate_horizon(double T, double dt) {
  if (!(T >= 0.0)) throw std::invalid_argument("simulate_pair: T must be nonnegative");
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_pair: dt must be positive");
}

}  // namespace

std::vector<PairState> simulate_pair_path(double u0, double v0, const ModelParams& params,
                                          double T, double dt,
                                          std::span<const double> checkpoints, RngStream& rng) {
  validate_horizon(T, dt);
  if (!(u0 >= 0.0 && v0 >= 0.0))
    throw std::invalid_argument("simulate_pair: start must be nonnegative");
  std::vector<double> marks(checkpoints.begin(), checkpoints.end());
  if (marks.empty()) marks.push_back(T);
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (marks[i] < 0.0 || marks[i] > T || (i > 0 && marks[i] < marks[i - 1]))
      throw std::invalid_argument("simulate_pair: checkpoints must be sorted within [0, T]");
  }

  PairState s{u0, v0, 0.0, false};
  std::vector<PairState> out;
  out.reserve(marks.size());
  for (double mark : marks) {
    while (s.t < mark) {
      if (s.absorbed) {
        s.t = mark;  // frozen state, just advance the clock
        break;
      }
      const double step = std::min(dt, mark - s.t);
      s = step_pair(s, params, step, rng);
    }
    out.push_back(s);
  }
  return out;
}

PairPath simulate_pair_dense(double u0, double v0, const ModelParams& params, double T,
                             double dt, RngStream& rng) {
  validate_horizon(T, dt);
  PairPath path;
  PairState s{u0, v0, 0.0, false};
  path.states.push_back(s);
  while (s.t < T) {
    const double step = std::min(dt, T - s.t);
    s = step_pair(s, params, step, rng);
    path.states.push_back(s);
    if (s.absorbed) {
      // integrand is zero from here on; record the endpoint and stop
      if (s.t < T) {
        PairState tail = s;
        tail.t = T;
        path.states.push_back(tail);
      }
      break;
    }
  }
  return path;
}

std::vector<std::pair<double, double>> time_change_accumulator(const PairPath& path,
                                                               const ModelParams& params) {
  std::vector<std::pair<double, double>> acc;
  acc.reserve(path.states.size());
  double total = 0.0;
  for (std::size_t i = 0; i < path.states.size(); ++i) {
    if (i > 0) {
      const PairState& a = path.states[i - 1];
      const PairState& b = path.states[i];
      total += 0.5 * params.kappa * (a.u * a.v + b.u * b.v) * (b.t - a.t);
    }
    acc.emplace_back(path.states[i].t, total);
  }
  return acc;
}

double moment_uv_closed_form(const ModelParams& params, double t) {
  return std::exp(params.rho * params.kappa * t);
}

double moment_u2_closed_form(const ModelParams& params, double t) {
  if (params.rho == 0.0) return 1.0 + params.kappa * t;
  return 1.0 + (std::exp(params.rho * params.kappa * t) - 1.0) / params.rho;
}

}  // namespace sbm
