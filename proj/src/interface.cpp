#include "symbranch/interface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symbranch/parallel.hpp"
#include "symbranch/rng.hpp"

namespace sbm {

namespace {

void require_continuum_1d(const LatticeConfig& cfg, const char* who) {
  if (cfg.mode != LatticeMode::continuum || cfg.d != 1)
    throw ConfigError(std::string(who) + ": requires continuum mode in d = 1");
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

InterfaceSnapshot extract_interface(const LatticeField& field, double threshold) {
  require_continuum_1d(field.config, "extract_interface");
  InterfaceSnapshot snap;
  snap.t = field.t;
  double lo = kInf, hi = -kInf;
  for (std::size_t i = 0; i < field.u.size(); ++i) {
    if (field.u[i] * field.v[i] > threshold) {
      const double x = field.config.coord(i);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (hi >= lo) {
    snap.empty = false;
    snap.left = lo;
    snap.right = hi;
    snap.width = hi - lo;
  }
  return snap;
}

double right_endpoint(const LatticeField& field, double threshold) {
  require_continuum_1d(field.config, "right_endpoint");
  for (std::size_t i = field.u.size(); i-- > 0;) {
    if (field.u[i] > threshold) return field.config.coord(i);
  }
  return -kInf;
}

double left_endpoint_v(const LatticeField& field, double threshold) {
  require_continuum_1d(field.config, "left_endpoint_v");
  for (std::size_t i = 0; i < field.v.size(); ++i) {
    if (field.v[i] > threshold) return field.config.coord(i);
  }
  return kInf;
}

double default_half_width(double t_max) {
  return 8.0 * std::sqrt(t_max * std::log(std::max(t_max, 2.0)));
}

namespace {

struct ReplicaTrace {
  std::vector<double> m;
  std::vector<double> m_alt;
  double sup_r_u = 0.0;
  double sup_neg_l_v = 0.0;
  bool excluded = false;
};

ReplicaTrace run_replica(const LatticeConfig& cfg, const ModelParams& params,
                         const SpeedExperimentConfig& sc, RngStream& rng) {
  LatticeField field = make_initial_field(cfg, {LatticeInit::Kind::heaviside});
  LatticeStepper stepper(cfg);
  const double x_edge_right = cfg.coord(cfg.n_sites() - 1);
  const double x_edge_left = cfg.coord(0);
  const double t_max = sc.t_grid.back();

  ReplicaTrace trace;
  double run_sup = 0.0, run_sup_alt = 0.0;
  std::size_t g = 0;
  auto scan = [&] {
    // Front radius at both floors in one pass over the field.
    double r_u = -kInf, r_u_alt = -kInf, l_v = kInf, l_v_alt = kInf;
    for (std::size_t i = 0; i < field.u.size(); ++i) {
      const double x = cfg.coord(i);
      if (field.u[i] > sc.threshold) r_u = std::max(r_u, x);
      if (field.u[i] > sc.threshold_alt) r_u_alt = std::max(r_u_alt, x);
      if (field.v[i] > sc.threshold) l_v = std::min(l_v, x);
      if (field.v[i] > sc.threshold_alt) l_v_alt = std::min(l_v_alt, x);
    }
    run_sup = std::max({run_sup, r_u, -l_v});
    run_sup_alt = std::max({run_sup_alt, r_u_alt, -l_v_alt});
    trace.sup_r_u = std::max(trace.sup_r_u, r_u);
    trace.sup_neg_l_v = std::max(trace.sup_neg_l_v, -l_v);
    if (r_u >= x_edge_right - cfg.h || l_v <= x_edge_left + cfg.h) trace.excluded = true;
  };
  scan();
  while (field.t < t_max - 1e-9 && !trace.excluded) {
    const double step = std::min(sc.dt, t_max - field.t);
    stepper.step(field, params, step, rng);
    scan();
    while (g < sc.t_grid.size() && field.t >= sc.t_grid[g] - 1e-9) {
      trace.m.push_back(run_sup);
      trace.m_alt.push_back(run_sup_alt);
      ++g;
    }
  }
  while (g < sc.t_grid.size()) {
    trace.m.push_back(run_sup);
    trace.m_alt.push_back(run_sup_alt);
    ++g;
  }
  return trace;
}

}  // namespace

SpeedExperimentResult speed_experiment(const SpeedExperimentConfig& sc,
                                       const ModelParams& params) {
  if (sc.t_grid.empty()) throw ConfigError("speed_experiment: empty T grid");
  for (std::size_t i = 0; i < sc.t_grid.size(); ++i)
    if (sc.t_grid[i] <= 0.0 || (i > 0 && sc.t_grid[i] <= sc.t_grid[i - 1]))
      throw ConfigError("speed_experiment: T grid must be positive and increasing");
  if (sc.replicas < 2) throw ConfigError("speed_experiment: need >= 2 replicas");

  LatticeConfig cfg = sc.lattice;
  cfg.mode = LatticeMode::continuum;
  cfg.d = 1;
  if (cfg.side == 0) {
    const double half = default_half_width(sc.t_grid.back());
    cfg.side = static_cast<int>(2.0 * std::ceil(half / cfg.h)) + 2;
  }
  cfg.validate();
  require_continuum_1d(cfg, "speed_experiment");

  std::vector<ReplicaTrace> traces(sc.replicas);
  parallel_for(sc.replicas, [&](std::size_t r) {
    RngStream rng(sc.seed, sc.stream_base + r);
    traces[r] = run_replica(cfg, params, sc, rng);
  });

  SpeedExperimentResult res;
  res.t_grid = sc.t_grid;
  for (auto& tr : traces) {
    res.excluded.push_back(tr.excluded);
    if (tr.excluded) ++res.n_excluded;
    res.m.push_back(std::move(tr.m));
    res.m_alt.push_back(std::move(tr.m_alt));
    res.sup_r_u.push_back(tr.sup_r_u);
    res.sup_neg_l_v.push_back(tr.sup_neg_l_v);
  }
  res.valid = res.n_excluded * 5 <= sc.replicas;  // <= 20%

  const std::size_t k = sc.t_grid.size();
  res.median_m.resize(k);
  res.q90_m.resize(k);
  double sens = 0.0;
  for (std::size_t g = 0; g < k; ++g) {
    std::vector<double> col, col_alt;
    for (std::size_t r = 0; r < sc.replicas; ++r) {
      if (res.excluded[r]) continue;
      col.push_back(res.m[r][g]);
      col_alt.push_back(res.m_alt[r][g]);
    }
    if (col.empty()) throw ConfigError("speed_experiment: every replica was excluded");
    res.median_m[g] = median(col);
    res.q90_m[g] = quantile(col, 0.9);
    const double med_alt = median(col_alt);
    if (res.median_m[g] > 0.0)
      sens = std::max(sens, std::fabs(res.median_m[g] - med_alt) / res.median_m[g]);
  }
  res.median_sensitivity = sens;

  // Fits on the upper half of the grid (by index), in log coordinates.
  std::vector<double> lx_t, lx_sqrt, lx_sqrtlog, ly;
  for (std::size_t g = k / 2; g < k; ++g) {
    const double T = sc.t_grid[g];
    if (res.median_m[g] <= 0.0) continue;
    lx_t.push_back(std::log(T));
    lx_sqrt.push_back(std::log(std::sqrt(T)));
    lx_sqrtlog.push_back(std::log(std::sqrt(T * std::log(T))));
    ly.push_back(std::log(res.median_m[g]));
  }
  if (ly.size() >= 2) {
    res.fit_exponent = fit_line(lx_t, ly);
    res.fit_vs_sqrt_t = fit_line(lx_sqrt, ly);
    res.fit_vs_sqrt_tlogt = fit_line(lx_sqrtlog, ly);
  }

  // Containment: per replica, C from the first half of the grid, envelope
  // 1.5 C sqrt(T log T) must hold on the second half.
  std::size_t contained = 0, considered = 0;
  const std::size_t first_half = std::max<std::size_t>(1, k / 2);
  for (std::size_t r = 0; r < sc.replicas; ++r) {
    if (res.excluded[r]) continue;
    ++considered;
    double c = 0.0;
    for (std::size_t g = 0; g < first_half; ++g) {
      const double env = std::sqrt(sc.t_grid[g] * std::log(sc.t_grid[g]));
      if (env > 0.0) c = std::max(c, res.m[r][g] / env);
    }
    bool ok = true;
    for (std::size_t g = first_half; g < k; ++g) {
      const double env = std::sqrt(sc.t_grid[g] * std::log(sc.t_grid[g]));
      if (res.m[r][g] > 1.5 * c * env) {
        ok = false;
        break;
      }
    }
    if (ok) ++contained;
  }
  res.containment_fraction =
      considered == 0 ? 0.0 : static_cast<double>(contained) / static_cast<double>(considered);
  return res;
}

}  // namespace sbm
