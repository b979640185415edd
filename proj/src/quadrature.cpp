#include "symbranch/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace sbm {

namespace {

struct Ctx {
  const std::function<double(double)>& f;
  long n_evals = 0;
  bool converged = true;
  double err = 0.0;
};

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(Ctx& c, double a, double b, double fa, double fm, double fb, double whole,
             double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = c.f(lm);
  const double frm = c.f(rm);
  c.n_evals += 2;
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth <= 0) {
    c.converged = false;
    c.err += std::fabs(delta);
    return left + right + delta / 15.0;
  }
  if (std::fabs(delta) <= 15.0 * tol) {
    c.err += std::fabs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return adapt(c, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(c, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_depth) {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: tolerance must be positive");
  QuadResult out;
  if (a == b) return out;
  Ctx c{f};
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  c.n_evals = 3;
  const double whole = simpson(fa, fm, fb, b - a);
  out.value = adapt(c, a, b, fa, fm, fb, whole, abs_tol, max_depth);
  out.err_est = c.err;
  out.n_evals = c.n_evals;
  out.converged = c.converged;
  return out;
}

}  // namespace sbm
