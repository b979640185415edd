#ifndef SYMBRANCH_INTERFACE_HPP
#define SYMBRANCH_INTERFACE_HPP

#include <cstdint>
#include <vector>

#include "symbranch/lattice.hpp"
#include "symbranch/params.hpp"
#include "symbranch/stats.hpp"

namespace sbm {

// Interface of a 1-D continuum-mode field: the sites where both types are
// present, u v above an absolute floor that regularizes Euler residue.
struct InterfaceSnapshot {
  double t = 0.0;
  double left = 0.0;
  double right = 0.0;
  double width = 0.0;
  bool empty = true;
};

InterfaceSnapshot extract_interface(const LatticeField& field, double threshold = 1e-12);

// sup{x : u(x) > threshold}; -inf when u is below the floor everywhere.
double right_endpoint(const LatticeField& field, double threshold = 1e-12);

// inf{x : v(x) > threshold}; +inf when v is below the floor everywhere.
double left_endpoint_v(const LatticeField& field, double threshold = 1e-12);

struct SpeedExperimentConfig {
  LatticeConfig lattice;            // continuum, d = 1; side 0 = auto-size
  std::vector<double> t_grid;       // increasing, positive
  double dt = 0.04;
  std::size_t replicas = 50;
  double threshold = 1e-12;
  double threshold_alt = 1e-8;      // sensitivity companion
  std::uint64_t seed = 1;
  std::uint64_t stream_base = 0;
};

struct SpeedExperimentResult {
  std::vector<double> t_grid;
  std::vector<std::vector<double>> m;      // [replica][grid] running-sup front radius
  std::vector<std::vector<double>> m_alt;  // same, at the sensitivity floor
  std::vector<double> sup_r_u;             // per replica: sup_t R(u_t), right front
  std::vector<double> sup_neg_l_v;         // per replica: sup_t -L(v_t), left front
  std::vector<bool> excluded;              // boundary contact before t_max
  std::size_t n_excluded = 0;
  bool valid = false;                      // <= 20% excluded

  std::vector<double> median_m;
  std::vector<double> q90_m;
  SlopeFit fit_exponent;      // log median M vs log T
  SlopeFit fit_vs_sqrt_t;     // log median M vs log sqrt(T)
  SlopeFit fit_vs_sqrt_tlogt; // log median M vs log sqrt(T log T)
  double containment_fraction = 0.0;  // replicas inside 1.5 C sqrt(T log T)
  double median_sensitivity = 0.0;    // max relative median gap between floors
};

// Heaviside-start front-speed measurement: per replica the running sup
// M(T) = sup_{t<=T} max(R(u_t), -L(v_t)), medians and envelope fits across
// replicas, and the two-floor sensitivity report. Replicas whose front
// reaches the domain edge before the last grid time are excluded; more than
// 20% exclusions invalidates the run.
SpeedExperimentResult speed_experiment(const SpeedExperimentConfig& cfg,
                                       const ModelParams& params);

// Domain half-width rule of thumb so the envelope fits with margin.
double default_half_width(double t_max);

}  // namespace sbm

#endif
