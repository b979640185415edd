#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "symbranch/dual.hpp"
#include "symbranch/nonspatial.hpp"
#include "symbranch/parallel.hpp"
#include "symbranch/stats.hpp"

using namespace sbm;

namespace {
const LatticeConfig kSingleSite{1, 1, LatticeMode::discrete, 1.0};
}

TEST_CASE("single particle never flips and accumulates nothing") {
  const ModelParams params(0.5, 4.0);
  RngStream rng(1, 0);
  DualState s = make_dual_state({{0}, {}}, kSingleSite);
  dual_advance_to(s, 25.0, params, kSingleSite, rng);
  CHECK(s.t == doctest::Approx(25.0));
  CHECK(s.l_same == 0.0);
  CHECK(s.l_diff == 0.0);
  CHECK(s.particles.size() == 1);
  CHECK(s.particles[0].color == Color::one);
}

TEST_CASE("two different colors on one site: l_diff is exactly t, no flips") {
  const ModelParams params(-0.3, 2.0);
  RngStream rng(2, 0);
  DualState s = make_dual_state({{0}, {0}}, kSingleSite);
  dual_advance_to(s, 7.5, params, kSingleSite, rng);
  CHECK(s.l_diff == doctest::Approx(7.5).epsilon(1e-12));
  CHECK(s.l_same == 0.0);
  CHECK(s.particles[0].color == Color::one);
  CHECK(s.particles[1].color == Color::two);
}

TEST_CASE("accumulator derivatives equal the pair counts event by event") {
  const ModelParams params(0.0, 1.5);
  const LatticeConfig cfg{1, 4, LatticeMode::discrete, 1.0};
  RngStream rng(3, 0);
  DualState s = make_dual_state({{0, 0}, {0}}, cfg);
  for (int e = 0; e < 300; ++e) {
    const PairCounts before = colocated_pairs(s);
    const double t0 = s.t, ls0 = s.l_same, ld0 = s.l_diff;
    dual_step(s, params, cfg, rng);
    const double dt = s.t - t0;
    CHECK(s.l_same - ls0 == doctest::Approx(before.same * dt).epsilon(1e-12));
    CHECK(s.l_diff - ld0 == doctest::Approx(before.diff * dt).epsilon(1e-12));
    CHECK(s.particles.size() == 3);  // flips never create or destroy particles
  }
}

TEST_CASE("same-color pair on one site: competing clock law of l_same") {
  // L_same = min(Exp(kappa), t); the flip ends same-color accumulation.
  const double kappa = 1.3, T = 2.0;
  const ModelParams params(0.0, kappa);
  const std::size_t reps = 100000;
  std::vector<double> l_same(reps), l_diff(reps);
  parallel_for(reps, [&](std::size_t r) {
    RngStream rng(42, r);
    DualState s = make_dual_state({{0, 0}, {}}, kSingleSite);
    dual_advance_to(s, T, params, kSingleSite, rng);
    l_same[r] = s.l_same;
    l_diff[r] = s.l_diff;
  });
  // atom at t: P(L_same = t) = exp(-kappa t)
  std::size_t censored = 0;
  std::vector<double> interior;
  for (std::size_t r = 0; r < reps; ++r) {
    CHECK(l_same[r] + l_diff[r] == doctest::Approx(T).epsilon(1e-9));
    if (l_same[r] >= T - 1e-12)
      ++censored;
    else
      interior.push_back(l_same[r]);
  }
  const double p_cens = static_cast<double>(censored) / reps;
  const double want = std::exp(-kappa * T);
  CHECK(std::fabs(p_cens - want) <= 3.0 * std::sqrt(want * (1.0 - want) / reps));
  // conditional law below t is the truncated exponential
  const auto cdf = [&](double x) {
    return (1.0 - std::exp(-kappa * x)) / (1.0 - std::exp(-kappa * T));
  };
  CHECK(ks_statistic(interior, cdf) <= 0.02);
}

TEST_CASE("unit homogeneous data with one particle gives unit weight exactly") {
  const ModelParams params(0.7, 2.0);
  const auto est = moment_via_duality({{0}, {}}, homogeneous_initial(1.0, 1.0), params,
                                      kSingleSite, 3.0, 200, 9, 0);
  CHECK(est.summary.mean == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(est.summary.std_err == 0.0);
  CHECK_FALSE(est.heavy_tail);
}

TEST_CASE("single-site mixed moment is deterministic: exp(rho kappa T)") {
  const double rho = -0.5, kappa = 1.0, T = 2.0;
  const ModelParams params(rho, kappa);
  const auto est = moment_via_duality({{0}, {0}}, homogeneous_initial(1.0, 1.0), params,
                                      kSingleSite, T, 500, 10, 0);
  CHECK(est.summary.std_err == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(est.summary.mean == doctest::Approx(std::exp(rho * kappa * T)).epsilon(1e-12));
  CHECK(est.summary.mean == doctest::Approx(0.3679).epsilon(1e-3));
}

TEST_CASE("single-site second moment reproduces the flip-clock integral") {
  const double rho = 0.5, kappa = 1.0, T = 1.0;
  const ModelParams params(rho, kappa);
  const auto est = moment_via_duality({{0, 0}, {}}, homogeneous_initial(1.0, 1.0), params,
                                      kSingleSite, T, 100000, 11, 0);
  const double want = moment_u2_closed_form(params, T);  // 2.2974
  CHECK(std::fabs(est.summary.mean - want) <= 3.0 * est.summary.std_err);
  CHECK_FALSE(est.heavy_tail);
}

TEST_CASE("flip member choice does not change the collision-time law") {
  const double kappa = 2.0, T = 1.5;
  const ModelParams params(0.0, kappa);
  auto run = [&](DualOptions::FlipChoice choice, std::uint64_t seed) {
    DualOptions opts;
    opts.flip_choice = choice;
    std::vector<double> ls(20000);
    parallel_for(ls.size(), [&](std::size_t r) {
      RngStream rng(seed, r);
      DualState s = make_dual_state({{0, 0}, {0}}, kSingleSite);
      dual_advance_to(s, T, params, kSingleSite, rng, opts);
      ls[r] = s.l_same;
    });
    return ls;
  };
  const auto uniform = run(DualOptions::FlipChoice::uniform, 21);
  const auto first = run(DualOptions::FlipChoice::first_member, 22);
  CHECK(ks_two_sample(uniform, first) <= 0.02);
}

TEST_CASE("dual moment curve uses common replicas: monotone weights at rho = 0") {
  const ModelParams params(0.0, 1.0);
  const LatticeConfig cfg{1, 4, LatticeMode::discrete, 1.0};
  const std::vector<double> grid{0.5, 1.0, 1.5, 2.0};
  const auto curve = dual_moment_curve({{0, 0}, {}}, homogeneous_initial(1.0, 1.0), params, cfg,
                                       grid, 5000, 12, 0);
  REQUIRE(curve.size() == 4);
  for (std::size_t i = 1; i < curve.size(); ++i)
    CHECK(curve[i].summary.mean >= curve[i - 1].summary.mean);
}

TEST_CASE("cross-route: dual estimate matches the direct lattice ensemble") {
  // E[u_T(0)^2] on a d=1 torus, homogeneous unit start.
  const double rho = 0.3, kappa = 1.0, T = 0.5;
  const ModelParams params(rho, kappa);
  const LatticeConfig cfg{1, 4, LatticeMode::discrete, 1.0};

  const auto dual_est = moment_via_duality({{0, 0}, {}}, homogeneous_initial(1.0, 1.0), params,
                                           cfg, T, 40000, 13, 0);

  const std::size_t reps = 20000;
  std::vector<double> direct(reps);
  parallel_for(reps, [&](std::size_t r) {
    RngStream rng(14, r);
    const std::vector<double> cp{T};
    const LatticeRun run = simulate_lattice(cfg, params, {}, T, 0.002, cp, rng);
    direct[r] = run.snapshots[0].u[0] * run.snapshots[0].u[0];
  });
  const auto lat = estimate_ensemble(direct);
  const double comb = std::sqrt(lat.std_err * lat.std_err +
                                dual_est.summary.std_err * dual_est.summary.std_err);
  CHECK(std::fabs(dual_est.summary.mean - lat.mean) <= 3.0 * comb);
}

TEST_CASE("lyapunov sweep returns finite fits and clear flags in the bounded regime") {
  const LatticeConfig cfg{1, 8, LatticeMode::discrete, 1.0};
  const std::vector<double> rhos{-0.6};
  const std::vector<double> kappas{1.0};
  const std::vector<double> grid{1, 2, 3, 4, 5, 6, 7, 8};
  const auto rows = lyapunov_sweep(2, rhos, kappas, grid, cfg, 20000, 15);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].heavy_tail);
  CHECK(rows[0].gamma.ci_low <= 0.02);
  CHECK(std::fabs(rows[0].gamma.slope) < 0.1);
}

TEST_CASE("dual rejects empty configurations") {
  CHECK_THROWS_AS((void)make_dual_state({{}, {}}, kSingleSite), ConfigError);
  CHECK_THROWS_AS((void)make_dual_state({{7}, {}}, kSingleSite), ConfigError);
}
