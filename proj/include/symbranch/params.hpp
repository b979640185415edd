#ifndef SYMBRANCH_PARAMS_HPP
#define SYMBRANCH_PARAMS_HPP

#include <stdexcept>

namespace sbm {

// The two scalars governing every SBM(rho, kappa) variant: the correlation
// rho of the driving noises and the branching rate kappa.
struct ModelParams {
  double rho;
  double kappa;

  ModelParams(double rho_, double kappa_) : rho(rho_), kappa(kappa_) {
    if (!(rho >= -1.0 && rho <= 1.0))
      throw std::invalid_argument("ModelParams: rho must lie in [-1, 1]");
    if (!(kappa > 0.0)) throw std::invalid_argument("ModelParams: kappa must be positive");
  }
};

}  // namespace sbm

#endif
