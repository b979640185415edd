#include "symbranch/dual.hpp"

#include <cmath>

#include "symbranch/parallel.hpp"

namespace sbm {

PairCounts colocated_pairs(const DualState& state) {
  PairCounts c;
  const auto& ps = state.particles;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      if (ps[i].site != ps[j].site) continue;
      if (ps[i].color == ps[j].color)
        ++c.same;
      else
        ++c.diff;
    }
  }
  return c;
}

namespace {

// Moves particle p one lattice step along a uniformly chosen direction.
void jump_particle(Particle& p, const LatticeConfig& cfg, RngStream& rng) {
  const auto side = static_cast<std::uint64_t>(cfg.side);
  const std::uint64_t dir = rng.next_below(2u * static_cast<std::uint64_t>(cfg.d));
  const int axis = static_cast<int>(dir / 2);
  const bool up = (dir % 2) == 0;
  std::uint64_t stride = 1;
  for (int a = 0; a < axis; ++a) stride *= side;
  const std::uint64_t block = stride * side;
  const std::uint64_t offset = p.site % block;
  const std::uint64_t base = p.site - offset;
  const std::uint64_t pos = offset / stride;
  const std::uint64_t rem = offset % stride;
  const std::uint64_t npos = up ? (pos + 1) % side : (pos + side - 1) % side;
  p.site = static_cast<std::uint32_t>(base + npos * stride + rem);
}

void flip_pair(DualState& state, int pair_index, RngStream& rng, const DualOptions& opts) {
  auto& ps = state.particles;
  int seen = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      if (ps[i].site != ps[j].site || ps[i].color != ps[j].color) continue;
      if (seen++ != pair_index) continue;
      const bool flip_second = opts.flip_choice == DualOptions::FlipChoice::uniform
                                   ? rng.next_below(2) == 1
                                   : false;
      Particle& target = flip_second ? ps[j] : ps[i];
      target.color = (target.color == Color::one) ? Color::two : Color::one;
      return;
    }
  }
  throw std::logic_error("flip_pair: pair index out of range");
}

// One event, optionally clipped at a time cap. Returns false when the cap
// was reached before the event fired (accumulators advanced to the cap).
bool event(DualState& state, const ModelParams& params, const LatticeConfig& cfg,
           RngStream& rng, const DualOptions& opts, bool capped, double cap) {
  const PairCounts counts = colocated_pairs(state);
  const auto n = static_cast<double>(state.particles.size());
  const double rate = n + params.kappa * counts.same;
  const double dt = -std::log(rng.next_uniform()) / rate;
  if (capped && state.t + dt >= cap) {
    const double span = cap - state.t;
    state.l_same += counts.same * span;
    state.l_diff += counts.diff * span;
    state.t = cap;
    return false;
  }
  state.l_same += counts.same * dt;
  state.l_diff += counts.diff * dt;
  state.t += dt;
  const double which = rng.next_uniform() * rate;
  if (which < n) {
    const auto idx = rng.next_below(state.particles.size());
    jump_particle(state.particles[idx], cfg, rng);
  } else {
    const int pair_index = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(counts.same)));
    flip_pair(state, pair_index, rng, opts);
  }
  return true;
}

}  // namespace

void dual_step(DualState& state, const ModelParams& params, const LatticeConfig& config,
               RngStream& rng, const DualOptions& opts) {
  config.validate(/*allow_single_site=*/true);
  if (state.particles.empty()) throw std::invalid_argument("dual_step: no particles");
  event(state, params, config, rng, opts, false, 0.0);
}

void dual_advance_to(DualState& state, double T, const ModelParams& params,
                     const LatticeConfig& config, RngStream& rng, const DualOptions& opts) {
  config.validate(/*allow_single_site=*/true);
  if (state.particles.empty()) throw std::invalid_argument("dual_advance_to: no particles");
  if (T < state.t) throw std::invalid_argument("dual_advance_to: T before current time");
  while (state.t < T) {
    if (!event(state, params, config, rng, opts, true, T)) break;
  }
}

DualState make_dual_state(const MomentSpec& spec, const LatticeConfig& config) {
  config.validate(/*allow_single_site=*/true);
  DualState s;
  s.particles.reserve(spec.u_sites.size() + spec.v_sites.size());
  for (auto k : spec.u_sites) {
    if (k >= config.n_sites()) throw ConfigError("moment spec: site out of range");
    s.particles.push_back({k, Color::one});
  }
  for (auto k : spec.v_sites) {
    if (k >= config.n_sites()) throw ConfigError("moment spec: site out of range");
    s.particles.push_back({k, Color::two});
  }
  if (s.particles.empty()) throw ConfigError("moment spec: needs at least one particle");
  return s;
}

InitialData homogeneous_initial(double u, double v) {
  return {[u](std::size_t) { return u; }, [v](std::size_t) { return v; }};
}

double duality_weight(const DualState& state, const InitialData& init,
                      const ModelParams& params) {
  double prod = 1.0;
  for (const Particle& p : state.particles)
    prod *= (p.color == Color::one) ? init.u0(p.site) : init.v0(p.site);
  return prod * std::exp(params.kappa * (state.l_same + params.rho * state.l_diff));
}

MomentEstimate moment_via_duality(const MomentSpec& spec, const InitialData& init,
                                  const ModelParams& params, const LatticeConfig& config,
                                  double T, std::size_t replicas, std::uint64_t seed,
                                  std::uint64_t stream_base, const DualOptions& opts) {
  std::vector<double> weights(replicas);
  parallel_for(replicas, [&](std::size_t r) {
    RngStream rng(seed, stream_base + r);
    DualState s = make_dual_state(spec, config);
    dual_advance_to(s, T, params, config, rng, opts);
    weights[r] = duality_weight(s, init, params);
  });
  MomentEstimate est;
  est.summary = estimate_ensemble(weights);
  est.heavy_tail = heavy_tail_flag(weights);
  est.T = T;
  return est;
}

std::vector<MomentEstimate> dual_moment_curve(const MomentSpec& spec, const InitialData& init,
                                              const ModelParams& params,
                                              const LatticeConfig& config,
                                              std::span<const double> t_grid,
                                              std::size_t replicas, std::uint64_t seed,
                                              std::uint64_t stream_base,
                                              const DualOptions& opts) {
  if (t_grid.empty()) throw std::invalid_argument("dual_moment_curve: empty grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (t_grid[i] <= t_grid[i - 1])
      throw std::invalid_argument("dual_moment_curve: grid must increase");
  const std::size_t k = t_grid.size();
  std::vector<std::vector<double>> weights(k, std::vector<double>(replicas));
  parallel_for(replicas, [&](std::size_t r) {
    RngStream rng(seed, stream_base + r);
    DualState s = make_dual_state(spec, config);
    for (std::size_t g = 0; g < k; ++g) {
      dual_advance_to(s, t_grid[g], params, config, rng, opts);
      weights[g][r] = duality_weight(s, init, params);
    }
  });
  std::vector<MomentEstimate> out(k);
  for (std::size_t g = 0; g < k; ++g) {
    out[g].summary = estimate_ensemble(weights[g]);
    out[g].heavy_tail = heavy_tail_flag(weights[g]);
    out[g].T = t_grid[g];
  }
  return out;
}

std::vector<LyapunovRow> lyapunov_sweep(int n, std::span<const double> rho_grid,
                                        std::span<const double> kappa_grid,
                                        std::span<const double> t_grid,
                                        const LatticeConfig& config, std::size_t replicas,
                                        std::uint64_t seed, const DualOptions& opts) {
  if (n < 2) throw std::invalid_argument("lyapunov_sweep: need moment order n >= 2");
  MomentSpec spec;
  spec.u_sites.assign(static_cast<std::size_t>(n), 0u);
  const InitialData init = homogeneous_initial(1.0, 1.0);
  std::vector<LyapunovRow> rows;
  std::uint64_t stream_base = 0;
  for (double rho : rho_grid) {
    for (double kappa : kappa_grid) {
      const ModelParams params(rho, kappa);
      LyapunovRow row;
      row.rho = rho;
      row.kappa = kappa;
      row.curve =
          dual_moment_curve(spec, init, params, config, t_grid, replicas, seed, stream_base, opts);
      std::vector<std::pair<double, double>> t_logm;
      for (const auto& e : row.curve) {
        t_logm.emplace_back(e.T, std::log(std::max(e.summary.mean, 1e-300)));
        row.heavy_tail = row.heavy_tail || e.heavy_tail;
      }
      row.gamma = lyapunov_fit(t_logm);
      rows.push_back(std::move(row));
      stream_base += replicas;
    }
  }
  return rows;
}

}  // namespace sbm
