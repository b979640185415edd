#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "symbranch/quadrature.hpp"
#include "symbranch/wedge.hpp"

using namespace sbm;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("critical curve special values") {
  CHECK(critical_p(0.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(critical_rho(2.0) == doctest::Approx(0.0).epsilon(1e-14));
  // p = 35 sits close to rho = -1
  CHECK(critical_rho(35.0) == doctest::Approx(-0.9958).epsilon(2e-3 / 0.9958));
  CHECK(critical_rho(35.0) == doctest::Approx(-std::cos(kPi / 35.0)).epsilon(1e-15));
  // rho(p) -> -1 as p grows
  CHECK(critical_rho(1e6) == doctest::Approx(-1.0).epsilon(1e-9));
  // theta -> pi as rho -> 1 pushes p -> 1
  CHECK(critical_p(0.999999) == doctest::Approx(1.0).epsilon(1e-3));
  // closed-form inverse: rho = -cos(pi/4) has p = 4
  CHECK(critical_p(-std::cos(kPi / 4.0)) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)critical_p(1.0), std::domain_error);
  CHECK_THROWS_AS((void)critical_p(-1.0), std::domain_error);
  CHECK_THROWS_AS((void)critical_rho(1.0), std::domain_error);
}

TEST_CASE("inverse pair identity on both sides") {
  double worst_p = 0.0;
  for (double p = 1.01; p <= 100.0; p += 0.0101)
    worst_p = std::max(worst_p, std::fabs(critical_p(critical_rho(p)) - p));
  CHECK(worst_p <= 1e-10);
  double worst_rho = 0.0;
  for (double rho = -0.999; rho <= 0.999; rho += 1e-3)
    worst_rho = std::max(worst_rho, std::fabs(critical_rho(critical_p(rho)) - rho));
  CHECK(worst_rho <= 1e-10);
}

TEST_CASE("geometry hand values") {
  // rho = 0: z -> z^2 sends 1 + i to 2i and 2 + i to 3 + 4i
  const auto g11 = build_geometry(1.0, 1.0, 0.0);
  CHECK(g11.theta == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(g11.alpha == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g11.z1t == doctest::Approx(0.0));
  CHECK(g11.z2t == doctest::Approx(2.0).epsilon(1e-13));

  const auto g21 = build_geometry(2.0, 1.0, 0.0);
  CHECK(g21.z1t == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(g21.z2t == doctest::Approx(4.0).epsilon(1e-13));

  // the diagonal maps to the imaginary axis for every rho
  for (double rho : {-0.9, -0.5, 0.3, 0.8}) {
    const auto g = build_geometry(1.7, 1.7, rho);
    CHECK(g.z1t == 0.0);
    CHECK(g.z2t > 0.0);
  }
  CHECK_THROWS_AS((void)build_geometry(0.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("exit axis probability") {
  CHECK(exit_axis_probability(build_geometry(1.0, 1.0, -0.3)) == doctest::Approx(0.5));
  const double want = 0.5 + std::atan(0.75) / kPi;  // Cauchy(3,4) positive mass
  CHECK(exit_axis_probability(build_geometry(2.0, 1.0, 0.0)) ==
        doctest::Approx(want).epsilon(1e-14));
  // independent oracle: harmonic measure of the x-axis in the quadrant for
  // rho = 0 is 1 - (2/pi) * polar angle of the start
  const double harmonic = 1.0 - 2.0 / kPi * std::atan2(1.0, 2.0);
  CHECK(want == doctest::Approx(harmonic).epsilon(1e-14));
  CHECK(want == doctest::Approx(0.70483).epsilon(1e-4));
}

TEST_CASE("exit cdf closed forms") {
  const auto g = build_geometry(1.0, 1.0, 0.0);
  CHECK(exit_cdf(g, Axis::x, 0.0) == 0.0);
  CHECK(exit_cdf(g, Axis::y, 0.0) == 0.0);
  // tail at y = sqrt(2): P(B1=0, B2 >= y) = 1/2 - arctan(1)/pi = 1/4
  const double y = std::sqrt(2.0);
  const double tail = (1.0 - exit_axis_probability(g)) - exit_cdf(g, Axis::y, y);
  CHECK(tail == doctest::Approx(0.25).epsilon(1e-12));
  // total masses per axis
  CHECK(exit_cdf(g, Axis::x, 1e9) == doctest::Approx(exit_axis_probability(g)).epsilon(1e-6));
  CHECK(exit_cdf(g, Axis::y, 1e9) ==
        doctest::Approx(1.0 - exit_axis_probability(g)).epsilon(1e-6));
  CHECK_THROWS_AS((void)exit_cdf(g, Axis::x, -1.0), std::domain_error);
  // monotone in r
  double prev = 0.0;
  for (double r = 0.0; r < 10.0; r += 0.1) {
    const double c = exit_cdf(g, Axis::x, r);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("densities normalize and match the cdfs across a rho/start grid") {
  for (double rho : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    for (auto [u, v] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {0.5, 3.0}}) {
      const auto g = build_geometry(u, v, rho);
      // complement identity: the two axis masses sum to one exactly
      const double p_x = exit_axis_probability(g);
      CHECK(p_x > 0.0);
      CHECK(p_x < 1.0);
      double total = 0.0;
      const double r_mid = 20.0;
      for (Axis axis : {Axis::x, Axis::y}) {
        // integrate the density in r with the kink-removing power
        // substitution r = q^(1/alpha); numeric head + closed-form tail
        const double m = 1.0 / g.alpha;
        const auto f = [&](double q) {
          if (q <= 0.0) return 0.0;
          const double r = std::pow(q, m);
          return exit_density(g, axis, r) * m * std::pow(q, m - 1.0);
        };
        const double q_mid = std::pow(r_mid, g.alpha);
        const auto head = integrate(f, 0.0, q_mid, 1e-11);
        const double axis_mass = (axis == Axis::x) ? p_x : 1.0 - p_x;
        // the numeric density integral must reproduce the arctan cdf
        CHECK(head.value == doctest::Approx(exit_cdf(g, axis, r_mid)).epsilon(1e-7));
        total += head.value + (axis_mass - exit_cdf(g, axis, r_mid));
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("symmetric start: the two axis densities coincide") {
  const auto g = build_geometry(1.3, 1.3, -0.4);
  for (double r : {0.1, 0.7, 1.3, 2.9, 8.0})
    CHECK(exit_density(g, Axis::x, r) ==
          doctest::Approx(exit_density(g, Axis::y, r)).epsilon(1e-10));
}

TEST_CASE("martingale identity: first moment of each coordinate equals its start") {
  for (double rho : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    for (auto [u, v] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {0.5, 3.0}}) {
      const auto g = build_geometry(u, v, rho);
      // E[B1_tau] lives on the x-axis only
      const auto m1 = exit_axis_moment(g, Axis::x, 1.0);
      REQUIRE(m1.finite);
      CHECK(m1.value == doctest::Approx(u).epsilon(1e-6));
      const auto m2 = exit_axis_moment(g, Axis::y, 1.0);
      REQUIRE(m2.finite);
      CHECK(m2.value == doctest::Approx(v).epsilon(1e-6));
    }
  }
}

TEST_CASE("moment finiteness threshold") {
  for (double rho : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    const auto g = build_geometry(1.0, 1.0, rho);
    const double pc = critical_p(rho);
    const auto below = exit_point_moment(g, 0.99 * pc);
    CHECK(below.finite);
    CHECK(below.value > 0.0);
    const auto at = exit_point_moment(g, pc);
    CHECK_FALSE(at.finite);
    const auto above = exit_point_moment(g, 1.5 * pc);
    CHECK_FALSE(above.finite);
  }
  // rho = 0, start (1,1), p = 1: E[B1 + B2] = 2 by two martingale identities
  const auto g = build_geometry(1.0, 1.0, 0.0);
  const auto m = exit_point_moment(g, 1.0);
  REQUIRE(m.finite);
  CHECK(m.value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(exit_point_moment(g, 2.0 - 5e-4).near_critical);
}

TEST_CASE("exit time moment criterion") {
  CHECK(exit_time_moment_finite(0.0, 1.9));
  CHECK_FALSE(exit_time_moment_finite(0.0, 2.0));
  // rho = -0.5: theta = pi/3, so finiteness holds exactly below p = 3
  CHECK(wedge_angle(-0.5) == doctest::Approx(kPi / 3.0).epsilon(1e-14));
  CHECK(exit_time_moment_finite(-0.5, 2.99));
  CHECK_FALSE(exit_time_moment_finite(-0.5, 3.0));
  for (double rho : {-0.99, -0.3, 0.0, 0.6, 0.99}) CHECK(exit_time_moment_finite(rho, 0.5));
}

TEST_CASE("critical curve table spans the requested grid") {
  const auto table = critical_curve_table(-0.9, 0.9, 19);
  CHECK(table.size() == 19);
  CHECK(table.front().rho == doctest::Approx(-0.9));
  CHECK(table.back().rho == doctest::Approx(0.9));
  for (std::size_t i = 1; i < table.size(); ++i) CHECK(table[i].p < table[i - 1].p);
}
