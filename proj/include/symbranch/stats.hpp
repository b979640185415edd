#ifndef SYMBRANCH_STATS_HPP
#define SYMBRANCH_STATS_HPP

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace sbm {

struct EnsembleSummary {
  double mean = 0.0;
  double std_err = 0.0;   // sample std / sqrt(n)
  double ci_low = 0.0;    // batch-means CI
  double ci_high = 0.0;
  std::size_t n = 0;
  int batches = 0;
};

// Mean, plain standard error and a batch-means CI (default 20 batches,
// Student-t on the batch means). Throws on n < 2.
EnsembleSummary estimate_ensemble(std::span<const double> values, int batches = 20);

// Two-sided KS statistic of samples against a reference CDF. Samples need
// not be sorted. Throws on empty input.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// Two-sample KS statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double ci_low = 0.0;   // 95% CI on the slope
  double ci_high = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

// Ordinary least squares of y against x.
SlopeFit fit_line(std::span<const double> x, std::span<const double> y);

// OLS slope of a log-moment curve over the trailing `window` fraction of
// the time grid (by t range, default trailing half). Needs >= 4 points in
// the window.
SlopeFit lyapunov_fit(std::span<const std::pair<double, double>> t_logm, double window = 0.5);

// True when the largest ceil(top_frac * n) weights carry more than `share`
// of the total weight; used to mark exponential-weight estimates whose CI
// cannot be trusted.
bool heavy_tail_flag(std::span<const double> weights, double top_frac = 0.01,
                     double share = 0.5);

// Two-sided 97.5% Student-t quantile (exact table through 30 df, asymptotic
// correction beyond).
double t_quantile_975(int df);

double median(std::vector<double> values);
double quantile(std::vector<double> values, double q);

}  // namespace sbm

#endif
