#include "symbranch/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sbm {

void LatticeConfig::validate(bool allow_single_site) const {
  if (d < 1 || d > 3) throw ConfigError("lattice: d must be 1, 2 or 3");
  if (side < (allow_single_site ? 1 : 2)) throw ConfigError("lattice: side must be >= 2");
  if (mode == LatticeMode::continuum) {
    if (d != 1) throw ConfigError("lattice: continuum mode requires d = 1");
    if (!(h > 0.0)) throw ConfigError("lattice: continuum mode requires h > 0");
  }
  const double sites = std::pow(static_cast<double>(side), d);
  if (sites > 1e8) throw ConfigError("lattice: side^d exceeds the memory budget");
}

std::size_t LatticeConfig::n_sites() const {
  std::size_t n = 1;
  for (int k = 0; k < d; ++k) n *= static_cast<std::size_t>(side);
  return n;
}

double LatticeConfig::max_stable_dt() const {
  return mode == LatticeMode::continuum ? 0.2 * h * h : 0.2;
}

namespace {

// Applies the per-axis second difference (f(i+1) - 2f(i) + f(i-1)) summed
// over axes into out, with torus wrap.
void second_difference_sum(std::span<const double> f, const LatticeConfig& cfg,
                           std::span<double> out) {
  const std::size_t n = f.size();
  const auto side = static_cast<std::size_t>(cfg.side);
  std::fill(out.begin(), out.end(), 0.0);
  std::size_t stride = 1;
  for (int axis = 0; axis < cfg.d; ++axis) {
    const std::size_t block = stride * side;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t offset = i % block;
      const std::size_t base = i - offset;
      const std::size_t pos = offset / stride;  // coordinate along this axis
      const std::size_t rem = offset % stride;
      const std::size_t up = base + ((pos + 1) % side) * stride + rem;
      const std::size_t dn = base + ((pos + side - 1) % side) * stride + rem;
      out[i] += f[up] - 2.0 * f[i] + f[dn];
    }
    stride = block;
  }
}

double laplacian_scale(const LatticeConfig& cfg) {
  return cfg.mode == LatticeMode::continuum ? 1.0 / (2.0 * cfg.h * cfg.h)
                                            : 1.0 / (2.0 * cfg.d);
}

}  // namespace

std::vector<double> discrete_laplacian(std::span<const double> f, const LatticeConfig& config) {
  config.validate();
  if (f.size() != config.n_sites()) throw ConfigError("laplacian: field size mismatch");
  std::vector<double> out(f.size());
  second_difference_sum(f, config, out);
  const double scale = laplacian_scale(config);
  for (double& x : out) x *= scale;
  return out;
}

std::vector<double> heat_semigroup(std::span<const double> f0, double t,
                                   const LatticeConfig& config) {
  config.validate();
  if (f0.size() != config.n_sites()) throw ConfigError("heat_semigroup: field size mismatch");
  if (!(t >= 0.0)) throw ConfigError("heat_semigroup: t must be nonnegative");
  const auto L = static_cast<std::size_t>(config.side);
  // e^(t Delta) factorizes over axes; each axis applies the exact 1-D torus
  // kernel with per-axis diffusion time t * laplacian_scale.
  const double t_ax = t * laplacian_scale(config);
  std::vector<double> kernel(L, 0.0);
  for (std::size_t dx = 0; dx < L; ++dx) {
    double k = 0.0;
    for (std::size_t m = 0; m < L; ++m) {
      const double w = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(L);
      k += std::exp(t_ax * (2.0 * std::cos(w) - 2.0)) * std::cos(w * static_cast<double>(dx));
    }
    kernel[dx] = k / static_cast<double>(L);
  }

  std::vector<double> cur(f0.begin(), f0.end());
  std::vector<double> next(cur.size(), 0.0);
  std::size_t stride = 1;
  for (int axis = 0; axis < config.d; ++axis) {
    const std::size_t block = stride * L;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const std::size_t offset = i % block;
      const std::size_t base = i - offset;
      const std::size_t pos = offset / stride;
      const std::size_t rem = offset % stride;
      double acc = 0.0;
      for (std::size_t dx = 0; dx < L; ++dx) {
        const std::size_t j = base + ((pos + dx) % L) * stride + rem;
        acc += kernel[dx] * cur[j];
      }
      next[i] = acc;
    }
    cur.swap(next);
    stride = block;
  }
  return cur;
}

std::pair<double, double> total_masses(const LatticeField& field) {
  const double w = field.config.site_weight();
  double mu = 0.0, mv = 0.0;
  for (double x : field.u) mu += x;
  for (double x : field.v) mv += x;
  return {w * mu, w * mv};
}

LatticeStepper::LatticeStepper(const LatticeConfig& config)
    : lap_u_(config.n_sites()),
      lap_v_(config.n_sites()),
      dw1_(config.n_sites()),
      dw2_(config.n_sites()) {}

void LatticeStepper::step(LatticeField& field, const ModelParams& params, double dt,
                          RngStream& rng) {
  const LatticeConfig& cfg = field.config;
  if (!(dt > 0.0)) throw ConfigError("step_lattice: dt must be positive");
  if (dt > cfg.max_stable_dt() * (1.0 + 1e-12))
    throw ConfigError("step_lattice: dt violates the explicit-scheme stability bound");

  second_difference_sum(field.u, cfg, lap_u_);
  second_difference_sum(field.v, cfg, lap_v_);
  const double lap = laplacian_scale(cfg);
  const double noise_scale =
      cfg.mode == LatticeMode::continuum ? 1.0 / cfg.h : 1.0;  // space-time white noise
  correlated_field_increments(params.rho, dt, dw1_, dw2_, rng);

  const std::size_t n = field.u.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double ui = field.u[i];
    const double vi = field.v[i];
    const double sigma = std::sqrt(params.kappa * std::max(ui, 0.0) * std::max(vi, 0.0) *
                                   noise_scale);
    const double nu = ui + lap * lap_u_[i] * dt + sigma * dw1_[i];
    const double nv = vi + lap * lap_v_[i] * dt + sigma * dw2_[i];
    field.u[i] = std::max(nu, 0.0);
    field.v[i] = std::max(nv, 0.0);
  }
  field.t += dt;
}

double LatticeStepper::pair_bracket(const LatticeField& field, const ModelParams& params) {
  double s = 0.0;
  for (std::size_t i = 0; i < field.u.size(); ++i) s += field.u[i] * field.v[i];
  return params.kappa * field.config.site_weight() * s;
}

LatticeField step_lattice(LatticeField field, const ModelParams& params, double dt,
                          RngStream& rng) {
  field.config.validate();
  LatticeStepper stepper(field.config);
  stepper.step(field, params, dt, rng);
  return field;
}

LatticeField make_initial_field(const LatticeConfig& config, const LatticeInit& init) {
  config.validate();
  LatticeField f;
  f.config = config;
  f.u.assign(config.n_sites(), 0.0);
  f.v.assign(config.n_sites(), 0.0);
  switch (init.kind) {
    case LatticeInit::Kind::homogeneous:
      std::fill(f.u.begin(), f.u.end(), init.u0);
      std::fill(f.v.begin(), f.v.end(), init.v0);
      break;
    case LatticeInit::Kind::indicator:
      if (init.site >= config.n_sites()) throw ConfigError("init: indicator site out of range");
      f.u[init.site] = init.u0;
      std::fill(f.v.begin(), f.v.end(), init.v0);
      break;
    case LatticeInit::Kind::heaviside:
      if (config.mode != LatticeMode::continuum || config.d != 1)
        throw ConfigError("init: heaviside requires continuum mode in d = 1");
      for (std::size_t i = 0; i < f.u.size(); ++i) {
        if (config.coord(i) < 0.0)
          f.u[i] = 1.0;
        else
          f.v[i] = 1.0;
      }
      break;
  }
  return f;
}

LatticeRun simulate_lattice(const LatticeConfig& config, const ModelParams& params,
                            const LatticeInit& init, double T, double dt,
                            std::span<const double> checkpoints, RngStream& rng) {
  if (!(T >= 0.0)) throw ConfigError("simulate_lattice: T must be nonnegative");
  if (!(dt > 0.0)) throw ConfigError("simulate_lattice: dt must be positive");
  if (dt > config.max_stable_dt() * (1.0 + 1e-12))
    throw ConfigError("simulate_lattice: dt violates the stability bound");
  std::vector<double> marks(checkpoints.begin(), checkpoints.end());
  if (marks.empty()) marks.push_back(T);
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (marks[i] < 0.0 || marks[i] > T || (i > 0 && marks[i] < marks[i - 1]))
      throw ConfigError("simulate_lattice: checkpoints must be sorted within [0, T]");
  }

  LatticeField field = make_initial_field(config, init);
  LatticeStepper stepper(config);
  MassLedger ledger;
  auto [mu, mv] = total_masses(field);
  ledger.mu = mu;
  ledger.mv = mv;

  LatticeRun run;
  run.snapshots.reserve(marks.size());
  run.ledgers.reserve(marks.size());
  for (double mark : marks) {
    while (field.t < mark - 1e-12 * std::max(1.0, mark)) {
      const double step = std::min(dt, mark - field.t);
      ledger.qv += LatticeStepper::pair_bracket(field, params) * step;
      ledger.xv = params.rho * ledger.qv;
      stepper.step(field, params, step, rng);
    }
    field.t = mark;
    auto [cmu, cmv] = total_masses(field);
    ledger.mu = cmu;
    ledger.mv = cmv;
    run.snapshots.push_back(field);
    run.ledgers.push_back(ledger);
  }
  return run;
}

}  // namespace sbm
