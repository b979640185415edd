#include "symbranch/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbm {

EnsembleSummary estimate_ensemble(std::span<const double> values, int batches) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("estimate_ensemble: need at least 2 replicas");
  if (batches < 2) throw std::invalid_argument("estimate_ensemble: need at least 2 batches");

  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  EnsembleSummary out;
  out.mean = mean;
  out.std_err = sd / std::sqrt(static_cast<double>(n));
  out.n = n;

  // Batch means in index order; trailing remainder goes to the last batch.
  const int b = std::min<int>(batches, static_cast<int>(n / 2));
  const std::size_t per = n / static_cast<std::size_t>(b);
  std::vector<double> bm(static_cast<std::size_t>(b), 0.0);
  for (int k = 0; k < b; ++k) {
    const std::size_t lo = static_cast<std::size_t>(k) * per;
    const std::size_t hi = (k == b - 1) ? n : lo + per;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += values[i];
    bm[static_cast<std::size_t>(k)] = s / static_cast<double>(hi - lo);
  }
  double bmean = 0.0;
  for (double v : bm) bmean += v;
  bmean /= b;
  double bss = 0.0;
  for (double v : bm) bss += (v - bmean) * (v - bmean);
  const double bsd = std::sqrt(bss / (b - 1));
  const double half = t_quantile_975(b - 1) * bsd / std::sqrt(static_cast<double>(b));
  out.ci_low = bmean - half;
  out.ci_high = bmean + half;
  out.batches = b;
  return out;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

SlopeFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 matched points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate x grid");
  SlopeFit f;
  f.n = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    rss += e * e;
  }
  f.r2 = (syy > 0.0) ? 1.0 - rss / syy : 1.0;
  if (x.size() > 2) {
    const double sigma2 = rss / (n - 2.0);
    f.slope_se = std::sqrt(sigma2 / sxx);
    const double half = t_quantile_975(static_cast<int>(x.size()) - 2) * f.slope_se;
    f.ci_low = f.slope - half;
    f.ci_high = f.slope + half;
  } else {
    f.slope_se = 0.0;
    f.ci_low = f.ci_high = f.slope;
  }
  return f;
}

SlopeFit lyapunov_fit(std::span<const std::pair<double, double>> t_logm, double window) {
  if (!(window > 0.0 && window <= 1.0))
    throw std::invalid_argument("lyapunov_fit: window fraction outside (0,1]");
  if (t_logm.empty()) throw std::invalid_argument("lyapunov_fit: empty curve");
  const double t_max = t_logm.back().first;
  const double t_min = t_logm.front().first;
  const double cut = t_max - window * (t_max - t_min);
  std::vector<double> x, y;
  for (const auto& [t, lm] : t_logm) {
    if (t >= cut) {
      x.push_back(t);
      y.push_back(lm);
    }
  }
  if (x.size() < 4) throw std::invalid_argument("lyapunov_fit: fewer than 4 points in window");
  return fit_line(x, y);
}

bool heavy_tail_flag(std::span<const double> weights, double top_frac, double share) {
  if (weights.empty()) return false;
  std::vector<double> w(weights.begin(), weights.end());
  std::sort(w.begin(), w.end(), std::greater<double>());
  double total = 0.0;
  for (double v : w) total += v;
  if (total <= 0.0) return false;
  const std::size_t k =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(top_frac * w.size())));
  double top = 0.0;
  for (std::size_t i = 0; i < k && i < w.size(); ++i) top += w[i];
  return top / total > share;
}

double t_quantile_975(int df) {
  static const double table[] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) throw std::invalid_argument("t_quantile_975: df must be >= 1");
  if (df <= 30) return table[df - 1];
  return 1.959964 + 2.4 / static_cast<double>(df);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: no values");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q outside [0,1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

}  // namespace sbm
