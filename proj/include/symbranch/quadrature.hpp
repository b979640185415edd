#ifndef SYMBRANCH_QUADRATURE_HPP
#define SYMBRANCH_QUADRATURE_HPP

#include <functional>

namespace sbm {

struct QuadResult {
  double value = 0.0;
  double err_est = 0.0;
  long n_evals = 0;
  bool converged = true;
};

// Adaptive Simpson on [a, b] with Richardson error control. Tolerance is
// absolute; max_depth caps recursion per panel.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-12, int max_depth = 52);

}  // namespace sbm

#endif
