#include "symbranch/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>

#include "symbranch/csv.hpp"
#include "symbranch/dual.hpp"
#include "symbranch/interface.hpp"
#include "symbranch/lattice.hpp"
#include "symbranch/nonspatial.hpp"
#include "symbranch/parallel.hpp"
#include "symbranch/self_duality.hpp"
#include "symbranch/stats.hpp"
#include "symbranch/svg.hpp"
#include "symbranch/wedge.hpp"
#include "symbranch/wedge_mc.hpp"

namespace sbm {

namespace {

using nlohmann::json;

std::string out_dir_of(const ExperimentConfig& cfg) {
  return cfg.get_string("out", "runs/" + cfg.get_string("kind", "unknown"));
}

CheckResult check_abs(const std::string& name, double measured, double target, double tol,
                      const std::string& note = "") {
  CheckResult c;
  c.name = name;
  c.measured = measured;
  c.tolerance = tol;
  c.comparator = "abs-diff<=";
  c.pass = std::fabs(measured - target) <= tol;
  c.note = note.empty() ? "target=" + CsvWriter::num(target) : note;
  return c;
}

CheckResult check_le(const std::string& name, double measured, double bound,
                     const std::string& note = "") {
  CheckResult c;
  c.name = name;
  c.measured = measured;
  c.tolerance = bound;
  c.comparator = "<=";
  c.pass = measured <= bound;
  c.note = note;
  return c;
}

CheckResult check_window(const std::string& name, double measured, double lo, double hi) {
  CheckResult c;
  c.name = name;
  c.measured = measured;
  c.tolerance = hi;
  c.comparator = "in-window";
  c.pass = measured >= lo && measured <= hi;
  c.note = "window=[" + CsvWriter::num(lo) + "," + CsvWriter::num(hi) + "]";
  return c;
}

CheckResult check_flag(const std::string& name, bool good, const std::string& note = "") {
  CheckResult c;
  c.name = name;
  c.measured = good ? 1.0 : 0.0;
  c.tolerance = 1.0;
  c.comparator = "==true";
  c.pass = good;
  c.note = note;
  return c;
}

json summary_json(const EnsembleSummary& s) {
  return {{"mean", s.mean}, {"std_err", s.std_err}, {"ci_low", s.ci_low},
          {"ci_high", s.ci_high}, {"n", s.n}};
}

json fit_json(const SlopeFit& f) {
  return {{"slope", f.slope},   {"intercept", f.intercept}, {"slope_se", f.slope_se},
          {"ci_low", f.ci_low}, {"ci_high", f.ci_high},     {"r2", f.r2},
          {"n", f.n}};
}

// ---------------------------------------------------------------- critical-curve

RunReport run_critical_curve(const ExperimentConfig& cfg) {
  cfg.require_known_keys({"kind", "out", "seed", "rho_min", "rho_max", "n_points", "svg"});
  const double rho_min = cfg.get_double("rho_min", -0.99);
  const double rho_max = cfg.get_double("rho_max", 0.99);
  const auto n_points = static_cast<std::size_t>(cfg.get_int("n_points", 199));
  const std::string out = out_dir_of(cfg);

  RunReport rep;
  const auto table = critical_curve_table(rho_min, rho_max, n_points);
  CsvWriter csv(out + "/critical_curve.csv", {"rho", "p_of_rho"});
  for (const auto& pt : table) csv.row({CsvWriter::num(pt.rho), CsvWriter::num(pt.p)});

  rep.checks.push_back(check_abs("critical_p(0)==2", critical_p(0.0), 2.0, 1e-12));
  rep.checks.push_back(
      check_abs("critical_rho(35)~-0.9958", critical_rho(35.0), -0.9958, 2e-3));
  double rt_rho = 0.0;
  for (double rho = -0.999; rho <= 0.999 + 1e-12; rho += 1e-3)
    rt_rho = std::max(rt_rho, std::fabs(critical_rho(critical_p(rho)) - rho));
  rep.checks.push_back(check_le("roundtrip_rho_max_err", rt_rho, 1e-10));
  double rt_p = 0.0;
  for (double p = 1.01; p <= 100.0; p += 0.01)
    rt_p = std::max(rt_p, std::fabs(critical_p(critical_rho(p)) - p));
  rep.checks.push_back(check_le("roundtrip_p_max_err", rt_p, 1e-10));

  if (cfg.get_bool("svg", false)) {
    SvgSeries s;
    s.label = "p(rho)";
    for (const auto& pt : table) s.points.emplace_back(pt.rho, pt.p);
    write_svg_chart(out + "/critical_curve.svg", "Critical moment curve", "rho", "p(rho)", {s});
  }
  rep.tables["n_points"] = n_points;
  return rep;
}

// ------------------------------------------------------------ nonspatial-moments

RunReport run_nonspatial_moments(const ExperimentConfig& cfg) {
  cfg.require_known_keys(
      {"kind", "out", "seed", "rho", "kappa", "t_grid", "dt", "replicas", "u0", "v0"});
  const ModelParams params(cfg.get_double("rho", 0.0), cfg.get_double("kappa", 1.0));
  const std::vector<double> t_grid = cfg.get_list("t_grid", {0.5, 1.0, 2.0});
  const double dt = cfg.get_double("dt", 1e-3);
  const auto replicas = static_cast<std::size_t>(cfg.get_int("replicas", 100000));
  const double u0 = cfg.get_double("u0", 1.0);
  const double v0 = cfg.get_double("v0", 1.0);
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  const std::string out = out_dir_of(cfg);
  const double T = t_grid.back();

  const std::size_t k = t_grid.size();
  std::vector<std::vector<double>> us(k, std::vector<double>(replicas));
  std::vector<std::vector<double>> uvs(k, std::vector<double>(replicas));
  std::vector<std::vector<double>> u2s(k, std::vector<double>(replicas));
  parallel_for(replicas, [&](std::size_t r) {
    RngStream rng(seed, r);
    const auto states = simulate_pair_path(u0, v0, params, T, dt, t_grid, rng);
    for (std::size_t g = 0; g < k; ++g) {
      us[g][r] = states[g].u;
      uvs[g][r] = states[g].u * states[g].v;
      u2s[g][r] = states[g].u * states[g].u;
    }
  });

  RunReport rep;
  CsvWriter csv(out + "/nonspatial_moments.csv",
                {"t", "mean_u", "se_u", "mean_uv", "se_uv", "closed_uv", "mean_u2", "se_u2",
                 "closed_u2"});
  const bool unit_start = u0 == v0;
  const double scale2 = u0 * v0;
  json rows = json::array();
  for (std::size_t g = 0; g < k; ++g) {
    const auto su = estimate_ensemble(us[g]);
    const auto suv = estimate_ensemble(uvs[g]);
    const auto su2 = estimate_ensemble(u2s[g]);
    const double closed_uv = scale2 * moment_uv_closed_form(params, t_grid[g]);
    const double closed_u2 = scale2 * moment_u2_closed_form(params, t_grid[g]);
    csv.row({CsvWriter::num(t_grid[g]), CsvWriter::num(su.mean), CsvWriter::num(su.std_err),
             CsvWriter::num(suv.mean), CsvWriter::num(suv.std_err), CsvWriter::num(closed_uv),
             CsvWriter::num(su2.mean), CsvWriter::num(su2.std_err), CsvWriter::num(closed_u2)});
    const std::string at = "@t=" + CsvWriter::num(t_grid[g]);
    rep.checks.push_back(
        check_abs("martingale_mean_u" + at, su.mean, u0, 3.0 * su.std_err));
    if (unit_start) {
      rep.checks.push_back(
          check_abs("uv_closed_form" + at, suv.mean, closed_uv, 3.0 * suv.std_err));
      rep.checks.push_back(check_abs("u2_closed_form" + at, su2.mean, closed_u2,
                                     std::max(3.0 * su2.std_err, 0.02 * closed_u2)));
    }
    rows.push_back({{"t", t_grid[g]},
                    {"mean_u", summary_json(su)},
                    {"mean_uv", summary_json(suv)},
                    {"mean_u2", summary_json(su2)},
                    {"closed_uv", closed_uv},
                    {"closed_u2", closed_u2}});
  }
  rep.tables["moments"] = rows;
  return rep;
}

// ----------------------------------------------------------------- dual-moments

RunReport run_dual_moments(const ExperimentConfig& cfg) {
  cfg.require_known_keys({"kind", "out", "seed", "rho", "kappa", "d", "side", "t_grid",
                          "replicas", "n", "m", "site", "u0", "v0", "crosscheck", "lattice_dt",
                          "lattice_replicas", "flip_choice"});
  const ModelParams params(cfg.get_double("rho", 0.0), cfg.get_double("kappa", 1.0));
  LatticeConfig lattice;
  lattice.d = static_cast<int>(cfg.get_int("d", 1));
  lattice.side = static_cast<int>(cfg.get_int("side", 1));
  // side = 1 is the nonspatial reduction: jumps land on the same site
  const bool single_site = lattice.side == 1;
  const std::vector<double> t_grid = cfg.get_list("t_grid", {1.0});
  const auto replicas = static_cast<std::size_t>(cfg.get_int("replicas", 100000));
  const int n = static_cast<int>(cfg.get_int("n", 2));
  const int m = static_cast<int>(cfg.get_int("m", 0));
  const auto site = static_cast<std::uint32_t>(cfg.get_u64("site", 0));
  const double u0 = cfg.get_double("u0", 1.0);
  const double v0 = cfg.get_double("v0", 1.0);
  const std::string crosscheck = cfg.get_string("crosscheck", "none");
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  const std::string out = out_dir_of(cfg);
  DualOptions opts;
  if (cfg.get_string("flip_choice", "uniform") == "first")
    opts.flip_choice = DualOptions::FlipChoice::first_member;

  MomentSpec spec;
  spec.u_sites.assign(static_cast<std::size_t>(n), site);
  spec.v_sites.assign(static_cast<std::size_t>(m), site);
  const InitialData init = homogeneous_initial(u0, v0);
  std::vector<MomentEstimate> curve =
      dual_moment_curve(spec, init, params, lattice, t_grid, replicas, seed, 0, opts);

  RunReport rep;
  CsvWriter csv(out + "/dual_moments.csv",
                {"rho", "kappa", "n", "m", "T", "estimate", "ci_low", "ci_high", "n_replicas",
                 "heavy_tail_flag"});
  json rows = json::array();
  for (const auto& est : curve) {
    csv.row({CsvWriter::num(params.rho), CsvWriter::num(params.kappa),
             CsvWriter::num(static_cast<std::int64_t>(n)),
             CsvWriter::num(static_cast<std::int64_t>(m)), CsvWriter::num(est.T),
             CsvWriter::num(est.summary.mean), CsvWriter::num(est.summary.ci_low),
             CsvWriter::num(est.summary.ci_high),
             CsvWriter::num(static_cast<std::uint64_t>(est.summary.n)),
             est.heavy_tail ? "1" : "0"});
    rows.push_back({{"T", est.T},
                    {"estimate", summary_json(est.summary)},
                    {"heavy_tail", est.heavy_tail}});
  }
  rep.tables["moments"] = rows;

  if (crosscheck == "closed") {
    if (!single_site)
      throw ConfigError("dual-moments: crosscheck=closed requires side=1 (nonspatial reduction)");
    for (const auto& est : curve) {
      const std::string at = "@T=" + CsvWriter::num(est.T);
      double closed = 0.0;
      if (n == 1 && m == 1)
        closed = u0 * v0 * moment_uv_closed_form(params, est.T);
      else if (n == 2 && m == 0)
        closed = u0 * u0 * moment_u2_closed_form(params, est.T);
      else
        throw ConfigError("dual-moments: closed form available for (n,m) in {(1,1),(2,0)}");
      rep.checks.push_back(check_abs("dual_vs_closed" + at, est.summary.mean, closed,
                                     std::max(3.0 * est.summary.std_err, 1e-9)));
      rep.checks.push_back(check_flag("heavy_tail_clear" + at, !est.heavy_tail));
    }
  } else if (crosscheck == "lattice") {
    if (m != 0) throw ConfigError("dual-moments: lattice crosscheck supports m=0 only");
    const double lattice_dt = cfg.get_double("lattice_dt", 0.002);
    const auto lattice_replicas =
        static_cast<std::size_t>(cfg.get_int("lattice_replicas", 20000));
    const double T = t_grid.back();
    std::vector<double> direct(lattice_replicas);
    parallel_for(lattice_replicas, [&](std::size_t r) {
      RngStream rng(seed ^ 0x9e3779b97f4a7c15ull, r);
      LatticeInit linit{LatticeInit::Kind::homogeneous, u0, v0, 0};
      const std::vector<double> cp{T};
      const LatticeRun run = simulate_lattice(lattice, params, linit, T, lattice_dt, cp, rng);
      direct[r] = std::pow(run.snapshots.back().u[site], n);
    });
    const auto lat = estimate_ensemble(direct);
    const auto& dual_est = curve.back();
    const double comb =
        std::sqrt(lat.std_err * lat.std_err + dual_est.summary.std_err * dual_est.summary.std_err);
    rep.checks.push_back(check_abs("dual_vs_lattice@T=" + CsvWriter::num(T),
                                   dual_est.summary.mean, lat.mean, 3.0 * comb));
    rep.checks.push_back(check_flag("heavy_tail_clear", !dual_est.heavy_tail));
    rep.tables["lattice_estimate"] = summary_json(lat);
  } else if (crosscheck != "none") {
    throw ConfigError("dual-moments: unknown crosscheck `" + crosscheck + "`");
  }
  return rep;
}

// ---------------------------------------------------------------- self-duality

RunReport run_self_duality(const ExperimentConfig& cfg) {
  cfg.require_known_keys({"kind", "out", "seed", "rho", "kappa", "d", "side", "T", "dt",
                          "replicas", "site", "amp_u", "amp_v", "u0", "v0"});
  const ModelParams params(cfg.get_double("rho", 0.0), cfg.get_double("kappa", 1.0));
  LatticeConfig lattice;
  lattice.d = static_cast<int>(cfg.get_int("d", 1));
  lattice.side = static_cast<int>(cfg.get_int("side", 16));
  SelfDualitySpec spec;
  spec.T = cfg.get_double("T", 1.0);
  spec.dt = cfg.get_double("dt", 0.002);
  spec.replicas = static_cast<std::size_t>(cfg.get_int("replicas", 10000));
  spec.site = static_cast<std::size_t>(cfg.get_u64("site", 0));
  spec.amp_u = cfg.get_double("amp_u", 0.5);
  spec.amp_v = cfg.get_double("amp_v", 0.5);
  spec.u0 = cfg.get_double("u0", 1.0);
  spec.v0 = cfg.get_double("v0", 1.0);
  spec.seed = cfg.get_u64("seed", 1);
  const std::string out = out_dir_of(cfg);

  const SelfDualityResult res = self_duality_check(params, lattice, spec);
  RunReport rep;
  CsvWriter csv(out + "/self_duality.csv",
                {"side", "re", "re_se", "re_ci_low", "re_ci_high", "im", "im_se"});
  csv.row({"lhs", CsvWriter::num(res.lhs.re.mean), CsvWriter::num(res.lhs.re.std_err),
           CsvWriter::num(res.lhs.re.ci_low), CsvWriter::num(res.lhs.re.ci_high),
           CsvWriter::num(res.lhs.im.mean), CsvWriter::num(res.lhs.im.std_err)});
  csv.row({"rhs", CsvWriter::num(res.rhs.re.mean), CsvWriter::num(res.rhs.re.std_err),
           CsvWriter::num(res.rhs.re.ci_low), CsvWriter::num(res.rhs.re.ci_high),
           CsvWriter::num(res.rhs.im.mean), CsvWriter::num(res.rhs.im.std_err)});
  rep.tables["lhs"] = {{"re", summary_json(res.lhs.re)}, {"im", summary_json(res.lhs.im)}};
  rep.tables["rhs"] = {{"re", summary_json(res.rhs.re)}, {"im", summary_json(res.rhs.im)}};

  if (res.deterministic) {
    rep.checks.push_back(check_abs("t0_exact_re", res.lhs.re.mean, res.rhs.re.mean, 1e-12));
    rep.checks.push_back(check_abs("t0_exact_im", res.lhs.im.mean, res.rhs.im.mean, 1e-12));
  } else {
    rep.checks.push_back(check_le("standardized_discrepancy_re", res.discrepancy_re, 3.0));
    rep.checks.push_back(check_le("standardized_discrepancy_im", res.discrepancy_im, 3.0));
  }
  return rep;
}

// ------------------------------------------------------------------- exit-dist

RunReport run_exit_dist(const ExperimentConfig& cfg) {
  cfg.require_known_keys({"kind", "out", "seed", "rho", "u0", "v0", "dt", "samples", "budget",
                          "source", "T", "ks_tol", "kappa"});
  const double rho = cfg.get_double("rho", 0.0);
  const double u0 = cfg.get_double("u0", 1.0);
  const double v0 = cfg.get_double("v0", 1.0);
  const double dt = cfg.get_double("dt", 1e-4);
  const auto samples = static_cast<std::size_t>(cfg.get_int("samples", 10000));
  const std::uint64_t budget = cfg.get_u64("budget", 1'000'000'000ull);
  const std::string source = cfg.get_string("source", "bm");
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  const std::string out = out_dir_of(cfg);
  const WedgeGeometry geom = build_geometry(u0, v0, rho);
  const double p_x_closed = exit_axis_probability(geom);

  RunReport rep;
  std::vector<double> x_pts, y_pts;  // axis-conditional samples
  double p_x_emp = 0.0, p_x_se = 0.0;

  if (source == "bm") {
    const double ks_tol = cfg.get_double("ks_tol", 0.02);
    const ExitEnsemble ens = ensemble_exit(u0, v0, rho, dt, samples, seed, 0, budget);
    CsvWriter csv(out + "/exit_samples.csv",
                  {"replica", "exit_time", "exit_x", "exit_y", "axis"});
    for (std::size_t i = 0; i < ens.samples.size(); ++i) {
      const auto& s = ens.samples[i];
      csv.row({CsvWriter::num(static_cast<std::uint64_t>(i)), CsvWriter::num(s.exit_time),
               CsvWriter::num(s.x), CsvWriter::num(s.y), s.axis == Axis::x ? "x" : "y"});
    }
    x_pts = ens.x_axis_points;
    y_pts = ens.y_axis_points;
    p_x_emp = ens.p_axis_x;
    p_x_se = ens.p_axis_x_se;
    rep.tables["n_budget_exceeded"] = ens.n_budget_exceeded;
    rep.tables["excluded_fraction"] =
        static_cast<double>(ens.n_budget_exceeded) / static_cast<double>(ens.n_requested);
    rep.tables["mean_exit_time"] = summary_json(ens.mean_exit_time);
    rep.tables["exit_time_infinite_suspect"] = ens.exit_time_infinite_suspect;
    rep.checks.push_back(check_abs("mean_b1_vs_start", ens.mean_b1.mean, u0,
                                   3.0 * ens.mean_b1.std_err));
    // conditional KS per axis against the closed-form law
    auto cond_cdf = [&](Axis axis, double total) {
      return [&geom, axis, total](double r) { return exit_cdf(geom, axis, r) / total; };
    };
    if (!x_pts.empty())
      rep.checks.push_back(check_le(
          "ks_x_axis", ks_statistic(x_pts, cond_cdf(Axis::x, p_x_closed)), ks_tol));
    if (!y_pts.empty())
      rep.checks.push_back(check_le(
          "ks_y_axis", ks_statistic(y_pts, cond_cdf(Axis::y, 1.0 - p_x_closed)), ks_tol));
    rep.checks.push_back(
        check_abs("exit_axis_probability", p_x_emp, p_x_closed, 3.0 * p_x_se));
  } else if (source == "nonspatial") {
    // Limit-law route: the nonspatial pair at a large horizon against the
    // exit law of the associated correlated Brownian pair.
    const double ks_tol = cfg.get_double("ks_tol", 0.05);
    const double T = cfg.get_double("T", 50.0);
    const ModelParams params(rho, cfg.get_double("kappa", 1.0));
    std::vector<ExitSample> pts(samples);
    std::vector<char> absorbed(samples, 0);
    parallel_for(samples, [&](std::size_t r) {
      RngStream rng(seed, r);
      const std::vector<double> cp{T};
      const auto states = simulate_pair_path(u0, v0, params, T, dt, cp, rng);
      const PairState& s = states.back();
      absorbed[r] = s.absorbed ? 1 : 0;
      ExitSample e;
      e.exit_time = T;
      // classify by the vanished (or smaller) coordinate
      if (s.v <= s.u) {
        e.axis = Axis::x;
        e.x = s.u;
        e.y = 0.0;
      } else {
        e.axis = Axis::y;
        e.x = 0.0;
        e.y = s.v;
      }
      pts[r] = e;
    });
    std::size_t on_x = 0;
    CsvWriter csv(out + "/limit_law_samples.csv", {"replica", "u_T", "axis"});
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].axis == Axis::x) {
        ++on_x;
        x_pts.push_back(pts[i].x);
      } else {
        y_pts.push_back(pts[i].y);
      }
      csv.row({CsvWriter::num(static_cast<std::uint64_t>(i)),
               CsvWriter::num(pts[i].axis == Axis::x ? pts[i].x : pts[i].y),
               pts[i].axis == Axis::x ? "x" : "y"});
    }
    p_x_emp = static_cast<double>(on_x) / static_cast<double>(samples);
    p_x_se = std::sqrt(p_x_emp * (1.0 - p_x_emp) / static_cast<double>(samples));
    std::size_t not_absorbed = 0;
    for (char a : absorbed)
      if (!a) ++not_absorbed;
    rep.tables["not_absorbed"] = not_absorbed;
    auto cond_cdf = [&](Axis axis, double total) {
      return [&geom, axis, total](double r) { return exit_cdf(geom, axis, r) / total; };
    };
    rep.checks.push_back(
        check_le("ks_x_axis", ks_statistic(x_pts, cond_cdf(Axis::x, p_x_closed)), ks_tol));
    rep.checks.push_back(check_le(
        "ks_y_axis", ks_statistic(y_pts, cond_cdf(Axis::y, 1.0 - p_x_closed)), ks_tol));
  } else {
    throw ConfigError("exit-dist: unknown source `" + source + "`");
  }
  rep.tables["p_axis_x"] = {{"empirical", p_x_emp}, {"se", p_x_se}, {"closed", p_x_closed}};
  return rep;
}

// -------------------------------------------------------------- lattice-moments

RunReport run_lattice_moments(const ExperimentConfig& cfg) {
  cfg.require_known_keys({"kind", "out", "seed", "rho", "kappa", "d", "side", "mode", "h",
                          "dt", "t_grid", "replicas", "init", "u0", "v0", "site", "observable",
                          "fit_t_min", "fit_t_max", "slope_min", "slope_max"});
  const ModelParams params(cfg.get_double("rho", 0.0), cfg.get_double("kappa", 1.0));
  LatticeConfig lattice;
  lattice.d = static_cast<int>(cfg.get_int("d", 1));
  lattice.side = static_cast<int>(cfg.get_int("side", 16));
  lattice.mode =
      cfg.get_string("mode", "discrete") == "continuum" ? LatticeMode::continuum
                                                        : LatticeMode::discrete;
  lattice.h = cfg.get_double("h", 1.0);
  const std::vector<double> t_grid = cfg.get_list("t_grid", {1.0});
  const double dt = cfg.get_double("dt", 0.05);
  const auto replicas = static_cast<std::size_t>(cfg.get_int("replicas", 10000));
  const std::string init_kind = cfg.get_string("init", "homogeneous");
  const std::string observable = cfg.get_string("observable", "uv0");
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  const std::string out = out_dir_of(cfg);

  LatticeInit init;
  init.u0 = cfg.get_double("u0", 1.0);
  init.v0 = cfg.get_double("v0", 1.0);
  init.site = static_cast<std::size_t>(cfg.get_u64("site", 0));
  if (init_kind == "homogeneous")
    init.kind = LatticeInit::Kind::homogeneous;
  else if (init_kind == "indicator")
    init.kind = LatticeInit::Kind::indicator;
  else if (init_kind == "heaviside")
    init.kind = LatticeInit::Kind::heaviside;
  else
    throw ConfigError("lattice-moments: unknown init `" + init_kind + "`");

  const std::size_t k = t_grid.size();
  std::vector<std::vector<double>> obs(k, std::vector<double>(replicas));
  std::vector<std::vector<double>> mass_u(k, std::vector<double>(replicas));
  parallel_for(replicas, [&](std::size_t r) {
    RngStream rng(seed, r);
    const LatticeRun run = simulate_lattice(lattice, params, init, t_grid.back(), dt, t_grid, rng);
    for (std::size_t g = 0; g < k; ++g) {
      const LatticeField& f = run.snapshots[g];
      if (observable == "uv0")
        obs[g][r] = f.u[0] * f.v[0];
      else if (observable == "u2_0")
        obs[g][r] = f.u[0] * f.u[0];
      else if (observable == "mass_u")
        obs[g][r] = total_masses(f).first;
      else
        throw ConfigError("lattice-moments: unknown observable `" + observable + "`");
      mass_u[g][r] = run.ledgers[g].mu;
    }
  });

  RunReport rep;
  CsvWriter csv(out + "/lattice_moments.csv", {"t", "estimate", "se", "ci_low", "ci_high"});
  std::vector<double> log_t, log_est;
  json rows = json::array();
  const double fit_t_min = cfg.get_double("fit_t_min", t_grid.front());
  const double fit_t_max = cfg.get_double("fit_t_max", t_grid.back());
  for (std::size_t g = 0; g < k; ++g) {
    const auto s = estimate_ensemble(obs[g]);
    csv.row({CsvWriter::num(t_grid[g]), CsvWriter::num(s.mean), CsvWriter::num(s.std_err),
             CsvWriter::num(s.ci_low), CsvWriter::num(s.ci_high)});
    rows.push_back({{"t", t_grid[g]}, {"estimate", summary_json(s)}});
    if (t_grid[g] >= fit_t_min && t_grid[g] <= fit_t_max && s.mean > 0.0) {
      log_t.push_back(std::log(t_grid[g]));
      log_est.push_back(std::log(s.mean));
    }
  }
  rep.tables["moments"] = rows;
  if (cfg.has("slope_min") || cfg.has("slope_max")) {
    const SlopeFit fit = fit_line(log_t, log_est);
    rep.tables["loglog_fit"] = fit_json(fit);
    rep.checks.push_back(check_window("loglog_decay_slope", fit.slope,
                                      cfg.get_double("slope_min", -1e9),
                                      cfg.get_double("slope_max", 1e9)));
  }
  return rep;
}

// -------------------------------------------------------------------- lyapunov

RunReport run_lyapunov(const ExperimentConfig& cfg) {
  cfg.require_known_keys({"kind", "out", "seed", "rho", "kappa", "d", "side", "t_grid",
                          "replicas", "n", "window", "expect", "flip_choice"});
  const double rho = cfg.get_double("rho", 0.0);
  const double kappa = cfg.get_double("kappa", 1.0);
  LatticeConfig lattice;
  lattice.d = static_cast<int>(cfg.get_int("d", 1));
  lattice.side = static_cast<int>(cfg.get_int("side", 16));
  const std::vector<double> t_grid = cfg.get_list("t_grid", {2, 4, 6, 8, 10, 12, 14, 16, 18, 20});
  const auto replicas = static_cast<std::size_t>(cfg.get_int("replicas", 100000));
  const int n = static_cast<int>(cfg.get_int("n", 2));
  const double window = cfg.get_double("window", 0.5);
  const std::string expect = cfg.get_string("expect", "none");
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  const std::string out = out_dir_of(cfg);
  DualOptions opts;
  if (cfg.get_string("flip_choice", "uniform") == "first")
    opts.flip_choice = DualOptions::FlipChoice::first_member;

  const std::vector<double> rho_grid{rho};
  const std::vector<double> kappa_grid{kappa};
  const auto rows = lyapunov_sweep(n, rho_grid, kappa_grid, t_grid, lattice, replicas, seed, opts);
  const LyapunovRow& row = rows.front();

  RunReport rep;
  CsvWriter csv(out + "/lyapunov.csv",
                {"rho", "kappa", "n", "m", "T", "estimate", "ci_low", "ci_high", "n_replicas",
                 "heavy_tail_flag"});
  std::vector<std::pair<double, double>> t_logm;
  for (const auto& est : row.curve) {
    csv.row({CsvWriter::num(rho), CsvWriter::num(kappa),
             CsvWriter::num(static_cast<std::int64_t>(n)), "0", CsvWriter::num(est.T),
             CsvWriter::num(est.summary.mean), CsvWriter::num(est.summary.ci_low),
             CsvWriter::num(est.summary.ci_high),
             CsvWriter::num(static_cast<std::uint64_t>(est.summary.n)),
             est.heavy_tail ? "1" : "0"});
    t_logm.emplace_back(est.T, std::log(std::max(est.summary.mean, 1e-300)));
  }
  rep.tables["gamma"] = fit_json(row.gamma);
  rep.tables["heavy_tail_any"] = row.heavy_tail;

  // recompute the window fit when a nondefault window was requested
  const SlopeFit gamma = window == 0.5 ? row.gamma : lyapunov_fit(t_logm, window);

  if (expect == "bounded") {
    rep.checks.push_back(check_flag("gamma_ci_contains_0",
                                    gamma.ci_low <= 0.0 && 0.0 <= gamma.ci_high,
                                    "ci=[" + CsvWriter::num(gamma.ci_low) + "," +
                                        CsvWriter::num(gamma.ci_high) + "]"));
    rep.checks.push_back(check_flag("heavy_tail_clear", !row.heavy_tail));
  } else if (expect == "critical") {
    bool increasing = true;
    for (std::size_t i = 1; i < row.curve.size(); ++i)
      increasing = increasing && row.curve[i].summary.mean > row.curve[i - 1].summary.mean;
    rep.checks.push_back(check_flag("moment_strictly_increasing", increasing));
    // early vs late log-slope: subexponential growth slows down
    const std::size_t half = t_logm.size() / 2;
    std::vector<double> x1, y1, x2, y2;
    for (std::size_t i = 0; i < t_logm.size(); ++i) {
      (i < half ? x1 : x2).push_back(t_logm[i].first);
      (i < half ? y1 : y2).push_back(t_logm[i].second);
    }
    const double early = fit_line(x1, y1).slope;
    const double late = fit_line(x2, y2).slope;
    rep.checks.push_back(check_le("late_slope_below_early", late, early,
                                  "early=" + CsvWriter::num(early)));
    rep.checks.push_back(check_flag("heavy_tail_clear", !row.heavy_tail));
    rep.tables["early_slope"] = early;
    rep.tables["late_slope"] = late;
  } else if (expect == "growth") {
    const double bound =
        kappa * (static_cast<double>(n) * (n - 1) / 2.0) * (rho - critical_rho(n));
    rep.checks.push_back(check_flag("gamma_positive", gamma.ci_low > 0.0,
                                    "ci_low=" + CsvWriter::num(gamma.ci_low)));
    rep.checks.push_back(check_le("gamma_below_perturbation_bound", gamma.slope,
                                  bound + 3.0 * gamma.slope_se,
                                  "bound=" + CsvWriter::num(bound)));
    rep.checks.push_back(check_flag("heavy_tail_clear", !row.heavy_tail));
  } else if (expect != "none") {
    throw ConfigError("lyapunov: unknown expect `" + expect + "`");
  }
  return rep;
}

// -------------------------------------------------------------- interface-speed

RunReport run_interface_speed(const ExperimentConfig& cfg) {
  cfg.require_known_keys({"kind", "out", "seed", "rho", "kappa", "h", "dt", "t_grid",
                          "replicas", "threshold", "threshold_alt", "half_width",
                          "exponent_min", "exponent_max", "svg"});
  const ModelParams params(cfg.get_double("rho", -0.997), cfg.get_double("kappa", 1.0));
  SpeedExperimentConfig sc;
  sc.lattice.mode = LatticeMode::continuum;
  sc.lattice.d = 1;
  sc.lattice.h = cfg.get_double("h", 0.5);
  const double half_width = cfg.get_double("half_width", 0.0);
  sc.lattice.side =
      half_width > 0.0 ? static_cast<int>(2.0 * std::ceil(half_width / sc.lattice.h)) + 2 : 0;
  sc.t_grid = cfg.get_list("t_grid", {32, 64, 128, 256, 512});
  sc.dt = cfg.get_double("dt", 0.04);
  sc.replicas = static_cast<std::size_t>(cfg.get_int("replicas", 50));
  sc.threshold = cfg.get_double("threshold", 1e-12);
  sc.threshold_alt = cfg.get_double("threshold_alt", 1e-8);
  sc.seed = cfg.get_u64("seed", 1);
  const std::string out = out_dir_of(cfg);

  const SpeedExperimentResult res = speed_experiment(sc, params);
  RunReport rep;
  CsvWriter csv(out + "/envelope.csv", {"replica", "T", "M", "excluded"});
  bool monotone = true;
  for (std::size_t r = 0; r < res.m.size(); ++r) {
    for (std::size_t g = 0; g < res.t_grid.size(); ++g) {
      csv.row({CsvWriter::num(static_cast<std::uint64_t>(r)), CsvWriter::num(res.t_grid[g]),
               CsvWriter::num(res.m[r][g]), res.excluded[r] ? "1" : "0"});
      if (g > 0 && res.m[r][g] < res.m[r][g - 1]) monotone = false;
    }
  }
  rep.tables["fit_exponent"] = fit_json(res.fit_exponent);
  rep.tables["fit_vs_sqrt_t"] = fit_json(res.fit_vs_sqrt_t);
  rep.tables["fit_vs_sqrt_tlogt"] = fit_json(res.fit_vs_sqrt_tlogt);
  rep.tables["median_m"] = res.median_m;
  rep.tables["q90_m"] = res.q90_m;
  rep.tables["t_grid"] = res.t_grid;
  rep.tables["n_excluded"] = res.n_excluded;
  rep.tables["median_threshold_sensitivity"] = res.median_sensitivity;

  rep.checks.push_back(check_flag("running_sup_monotone", monotone));
  rep.checks.push_back(check_window("growth_exponent_vs_T", res.fit_exponent.slope,
                                    cfg.get_double("exponent_min", 0.4),
                                    cfg.get_double("exponent_max", 0.7)));
  rep.checks.push_back(check_flag(
      "containment_90pct", res.containment_fraction >= 0.9,
      "fraction=" + CsvWriter::num(res.containment_fraction)));
  rep.checks.push_back(check_flag(
      "exclusions_within_20pct", res.valid,
      "excluded=" + CsvWriter::num(static_cast<std::uint64_t>(res.n_excluded))));

  if (cfg.get_bool("svg", false)) {
    SvgSeries med{"median M(T)", "#1f6feb", {}};
    SvgSeries env{"sqrt(T log T)", "#d62728", {}};
    for (std::size_t g = 0; g < res.t_grid.size(); ++g) {
      med.points.emplace_back(res.t_grid[g], std::max(res.median_m[g], 1e-9));
      env.points.emplace_back(res.t_grid[g],
                              std::sqrt(res.t_grid[g] * std::log(res.t_grid[g])));
    }
    write_svg_chart(out + "/envelope.svg", "Interface envelope", "T", "M(T)", {med, env}, true,
                    true);
  }
  return rep;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
  const std::string kind = cfg.get_string("kind", "");
  if (kind.empty()) throw ConfigError("run_experiment: missing `kind`");
  const auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  if (kind == "critical-curve")
    rep = run_critical_curve(cfg);
  else if (kind == "nonspatial-moments")
    rep = run_nonspatial_moments(cfg);
  else if (kind == "dual-moments")
    rep = run_dual_moments(cfg);
  else if (kind == "self-duality")
    rep = run_self_duality(cfg);
  else if (kind == "exit-dist")
    rep = run_exit_dist(cfg);
  else if (kind == "lattice-moments")
    rep = run_lattice_moments(cfg);
  else if (kind == "lyapunov")
    rep = run_lyapunov(cfg);
  else if (kind == "interface-speed")
    rep = run_interface_speed(cfg);
  else
    throw ConfigError("run_experiment: unknown kind `" + kind + "`");
  const auto t1 = std::chrono::steady_clock::now();
  rep.kind = kind;
  rep.seed = cfg.get_u64("seed", 1);
  rep.config_hash = cfg.hash_hex();
  rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  append_report(out_dir_of(cfg), rep);
  return rep;
}

int run_experiment_cli(const ExperimentConfig& cfg, bool quiet) {
  try {
    const RunReport rep = run_experiment(cfg);
    if (!quiet) {
      std::cout << rep.kind << " seed=" << rep.seed << " config=" << rep.config_hash << "\n"
                << rep.summary_lines();
      std::cout << (rep.all_pass() ? "PASS" : "FAIL") << " (" << rep.checks.size()
                << " checks, " << rep.wall_ms / 1000.0 << " s)\n";
    }
    return rep.all_pass() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sbm
