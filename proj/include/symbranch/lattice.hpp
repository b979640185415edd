#ifndef SYMBRANCH_LATTICE_HPP
#define SYMBRANCH_LATTICE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "symbranch/errors.hpp"
#include "symbranch/params.hpp"
#include "symbranch/rng.hpp"

namespace sbm {

enum class LatticeMode { discrete, continuum };

// Finite torus of Z^d (discrete mode) or a periodic 1-D grid of spacing h
// approximating the real line (continuum mode).
struct LatticeConfig {
  int d = 1;
  int side = 2;
  LatticeMode mode = LatticeMode::discrete;
  double h = 1.0;  // grid spacing, continuum mode only

  // Lattice simulation needs side >= 2; the particle dual also accepts the
  // side = 1 torus (every jump lands on the same site: the nonspatial
  // reduction).
  void validate(bool allow_single_site = false) const;
  std::size_t n_sites() const;
  // Physical coordinate of a 1-D site, centered so index side/2 sits at 0.
  double coord(std::size_t i) const { return (static_cast<double>(i) - side / 2) * h; }
  // Quadrature weight of one site in <.,.> sums: 1 discrete, h continuum.
  double site_weight() const { return mode == LatticeMode::continuum ? h : 1.0; }
  // Largest stable explicit Euler step for the heat part.
  double max_stable_dt() const;
};

struct LatticeField {
  LatticeConfig config;
  std::vector<double> u;
  std::vector<double> v;
  double t = 0.0;
};

// Running totals tracked along a simulation:
//   mu, mv : current total masses <u,1>, <v,1>
//   qv     : kappa * int_0^t <u_s, v_s> ds   (square function of <u,1>)
//   xv     : rho * qv                        (cross variation)
struct MassLedger {
  double mu = 0.0;
  double mv = 0.0;
  double qv = 0.0;
  double xv = 0.0;
};

// Discrete Laplacian sum_{|k-i|=1} (1/2d)(f(k) - f(i)) on the torus, or the
// 1-D second difference (f(i+1) - 2 f(i) + f(i-1)) / (2 h^2) in continuum
// mode.
std::vector<double> discrete_laplacian(std::span<const double> f, const LatticeConfig& config);

// Deterministic heat flow m_t = e^(t Delta) m_0 on the torus, computed from
// the exact Fourier eigenbasis axis by axis; the first-moment oracle.
std::vector<double> heat_semigroup(std::span<const double> f0, double t,
                                   const LatticeConfig& config);

// (<u,1>, <v,1>) with the mode's quadrature weight.
std::pair<double, double> total_masses(const LatticeField& field);

// One Euler step of dSBM / discretized cSBM: heat drift plus sitewise
// rho-correlated noise sqrt(kappa u v s) dW with s = 1 (discrete) or 1/h
// (continuum, white-noise scaling). Negative sites clamp to 0 without
// freezing; the Laplacian may re-seed them. Throws ConfigError when dt
// violates the stability bound.
LatticeField step_lattice(LatticeField field, const ModelParams& params, double dt,
                          RngStream& rng);

// Reusable stepper holding scratch buffers for long runs.
class LatticeStepper {
 public:
  explicit LatticeStepper(const LatticeConfig& config);
  void step(LatticeField& field, const ModelParams& params, double dt, RngStream& rng);
  // kappa * <u,v> of the current field, the ledger integrand.
  static double pair_bracket(const LatticeField& field, const ModelParams& params);

 private:
  std::vector<double> lap_u_;
  std::vector<double> lap_v_;
  std::vector<double> dw1_;
  std::vector<double> dw2_;
};

struct LatticeInit {
  enum class Kind { homogeneous, indicator, heaviside } kind = Kind::homogeneous;
  double u0 = 1.0;       // homogeneous value / indicator amplitude for u
  double v0 = 1.0;       // homogeneous value / indicator amplitude for v
  std::size_t site = 0;  // indicator site
};

LatticeField make_initial_field(const LatticeConfig& config, const LatticeInit& init);

struct LatticeRun {
  std::vector<LatticeField> snapshots;  // one per checkpoint
  std::vector<MassLedger> ledgers;      // ledger state at each checkpoint
};

// Simulates up to the last checkpoint, recording snapshots and the running
// ledger. Checkpoints must be sorted and nonnegative; an empty list records
// the state at T only.
LatticeRun simulate_lattice(const LatticeConfig& config, const ModelParams& params,
                            const LatticeInit& init, double T, double dt,
                            std::span<const double> checkpoints, RngStream& rng);

}  // namespace sbm

#endif
