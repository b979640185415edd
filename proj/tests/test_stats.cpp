#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "symbranch/quadrature.hpp"
#include "symbranch/rng.hpp"
#include "symbranch/stats.hpp"

using namespace sbm;

TEST_CASE("constant inputs give zero standard error") {
  std::vector<double> v(100, 3.25);
  const auto s = estimate_ensemble(v);
  CHECK(s.mean == doctest::Approx(3.25));
  CHECK(s.std_err == 0.0);
  CHECK(s.ci_low == doctest::Approx(3.25));
  CHECK(s.ci_high == doctest::Approx(3.25));
}

TEST_CASE("ensemble mean of standard normals lands near zero") {
  RngStream rng(17, 0);
  std::vector<double> v(10000);
  for (auto& x : v) x = rng.next_normal();
  const auto s = estimate_ensemble(v);
  CHECK(std::fabs(s.mean) < 0.03);
  CHECK(s.std_err == doctest::Approx(0.01).epsilon(0.05));
  CHECK(s.ci_low < s.mean);
  CHECK(s.ci_high > s.mean);
}

TEST_CASE("batch CI roughly contains the plain CI for iid light tails") {
  // simulation study: in most repetitions the batch-means interval covers
  // the plain +-1.96 se interval
  int covered = 0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    RngStream rng(900 + t, 0);
    std::vector<double> v(4000);
    for (auto& x : v) x = rng.next_normal();
    const auto s = estimate_ensemble(v);
    const double lo = s.mean - 1.96 * s.std_err;
    const double hi = s.mean + 1.96 * s.std_err;
    if (s.ci_low <= lo && s.ci_high >= hi) ++covered;
  }
  CHECK(covered >= trials * 9 / 20);  // batch CI is wider about half the time at 20 batches
}

TEST_CASE("estimate_ensemble rejects degenerate input") {
  std::vector<double> one{1.0};
  CHECK_THROWS_AS((void)estimate_ensemble(one), std::invalid_argument);
}

TEST_CASE("ks statistic hand cases") {
  // single sample at the median of the reference law
  const auto cdf = [](double x) { return x; };  // U(0,1)
  CHECK(ks_statistic({0.5}, cdf) == doctest::Approx(0.5));
  // samples from the cdf itself: Kolmogorov bound at 99% confidence
  RngStream rng(4, 4);
  std::vector<double> v(10000);
  for (auto& x : v) x = rng.next_uniform();
  CHECK(ks_statistic(v, cdf) < 1.63 / std::sqrt(10000.0));
  // a shifted law is visibly far
  std::vector<double> shifted(10000);
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = 0.25 + 0.75 * v[i];
  CHECK(ks_statistic(shifted, cdf) > 0.2);
}

TEST_CASE("two-sample ks") {
  RngStream rng(5, 5);
  std::vector<double> a(20000), b(20000), c(20000);
  for (auto& x : a) x = rng.next_normal();
  for (auto& x : b) x = rng.next_normal();
  for (auto& x : c) x = rng.next_normal() + 1.0;
  CHECK(ks_two_sample(a, b) < 0.02);
  CHECK(ks_two_sample(a, c) > 0.3);
}

TEST_CASE("lyapunov fit recovers an exact line") {
  std::vector<std::pair<double, double>> curve;
  for (int i = 0; i <= 20; ++i) curve.emplace_back(i, 0.5 * i - 2.0);
  const auto fit = lyapunov_fit(curve);
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.slope_se == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("bounded curve yields a slope CI containing zero") {
  RngStream rng(6, 0);
  std::vector<std::pair<double, double>> curve;
  for (int i = 1; i <= 16; ++i) curve.emplace_back(i, 0.02 * rng.next_normal());
  const auto fit = lyapunov_fit(curve);
  CHECK(fit.ci_low <= 0.0);
  CHECK(fit.ci_high >= 0.0);
}

TEST_CASE("lyapunov fit needs four points in the window") {
  std::vector<std::pair<double, double>> curve{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}};
  CHECK_NOTHROW((void)lyapunov_fit(curve, 1.0));
  std::vector<std::pair<double, double>> tiny{{0, 0}, {1, 1}, {2, 2}};
  CHECK_THROWS_AS((void)lyapunov_fit(tiny, 0.5), std::invalid_argument);
}

TEST_CASE("heavy tail flag") {
  std::vector<double> flat(1000, 1.0);
  CHECK_FALSE(heavy_tail_flag(flat));
  std::vector<double> spiked(1000, 1.0);
  for (int i = 0; i < 10; ++i) spiked[i] = 1e6;  // top 1% carries ~ everything
  CHECK(heavy_tail_flag(spiked));
}

TEST_CASE("quantiles") {
  std::vector<double> v{5, 1, 4, 2, 3};
  CHECK(median(v) == doctest::Approx(3.0));
  CHECK(quantile(v, 0.0) == doctest::Approx(1.0));
  CHECK(quantile(v, 1.0) == doctest::Approx(5.0));
}

TEST_CASE("adaptive quadrature sanity") {
  const auto gauss = [](double x) { return std::exp(-x * x / 2.0); };
  const auto res = integrate(gauss, -8.0, 8.0, 1e-13);
  CHECK(res.converged);
  CHECK(res.value == doctest::Approx(std::sqrt(2.0 * 3.141592653589793)).epsilon(1e-11));
  const auto lin = integrate([](double x) { return 3.0 * x; }, 0.0, 2.0, 1e-14);
  CHECK(lin.value == doctest::Approx(6.0).epsilon(1e-13));
}
