#ifndef SYMBRANCH_DUAL_HPP
#define SYMBRANCH_DUAL_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "symbranch/lattice.hpp"
#include "symbranch/params.hpp"
#include "symbranch/rng.hpp"
#include "symbranch/stats.hpp"

namespace sbm {

// Colored-particle moment dual. Particles perform independent rate-1
// continuous-time simple random walks on the torus; while a pair of equal
// color shares a site, that pair flips one member's color at rate kappa.
// The weight exp(kappa (L= + rho L!=)) over the accumulated same/different
// color collision times turns dual expectations into mixed moments of the
// forward model.

enum class Color : std::uint8_t { one = 1, two = 2 };

struct Particle {
  std::uint32_t site;
  Color color;
};

struct DualState {
  std::vector<Particle> particles;
  double l_same = 0.0;  // accumulated co-located same-color pair time
  double l_diff = 0.0;  // accumulated co-located different-color pair time
  double t = 0.0;
};

struct DualOptions {
  // Which member of the selected same-color pair flips. The dynamics is
  // exchangeable either way; uniform is the default, first-member is kept
  // switchable so the choice is empirically testable.
  enum class FlipChoice { uniform, first_member } flip_choice = FlipChoice::uniform;
};

struct PairCounts {
  int same = 0;
  int diff = 0;
};
PairCounts colocated_pairs(const DualState& state);

// One Gillespie event: exponential holding time at total rate
// N + kappa * (#same-color co-located pairs), linear accumulator advance,
// then either a uniformly chosen particle jumps to a uniformly chosen
// nearest neighbor or a uniformly chosen eligible pair flips.
void dual_step(DualState& state, const ModelParams& params, const LatticeConfig& config,
               RngStream& rng, const DualOptions& opts = {});

// Events until time T; the accumulators advance exactly to T (the clipped
// final holding period executes no event, which is correct by
// memorylessness).
void dual_advance_to(DualState& state, double T, const ModelParams& params,
                     const LatticeConfig& config, RngStream& rng, const DualOptions& opts = {});

// Starting configuration for E[u(k_1)...u(k_n) v(k_{n+1})...v(k_{n+m})]:
// color-1 particles at u_sites, color-2 at v_sites.
struct MomentSpec {
  std::vector<std::uint32_t> u_sites;
  std::vector<std::uint32_t> v_sites;
};

DualState make_dual_state(const MomentSpec& spec, const LatticeConfig& config);

// Initial data evaluated per site; must be product-form / deterministic so
// (u0,v0)^(l_t) is a product over particle positions.
struct InitialData {
  std::function<double(std::size_t)> u0;
  std::function<double(std::size_t)> v0;
};
InitialData homogeneous_initial(double u, double v);

double duality_weight(const DualState& state, const InitialData& init,
                      const ModelParams& params);

struct MomentEstimate {
  EnsembleSummary summary;
  bool heavy_tail = false;  // top 1% of weights carry > 50% of the estimate
  double T = 0.0;
};

// Monte Carlo moment estimate by duality; replica r uses stream
// (seed, stream_base + r).
MomentEstimate moment_via_duality(const MomentSpec& spec, const InitialData& init,
                                  const ModelParams& params, const LatticeConfig& config,
                                  double T, std::size_t replicas, std::uint64_t seed,
                                  std::uint64_t stream_base, const DualOptions& opts = {});

// Same replicas evaluated at every grid time (common random numbers), so
// per-replica weights are monotone where the collision times are.
std::vector<MomentEstimate> dual_moment_curve(const MomentSpec& spec, const InitialData& init,
                                              const ModelParams& params,
                                              const LatticeConfig& config,
                                              std::span<const double> t_grid,
                                              std::size_t replicas, std::uint64_t seed,
                                              std::uint64_t stream_base,
                                              const DualOptions& opts = {});

struct LyapunovRow {
  double rho = 0.0;
  double kappa = 0.0;
  SlopeFit gamma;       // late-window slope of log E[u_t(k)^n]
  bool heavy_tail = false;
  std::vector<MomentEstimate> curve;
};

// For each (rho, kappa): n same-color particles at one site (homogeneous
// unit initial data), moment curve on the T grid, late-window slope.
std::vector<LyapunovRow> lyapunov_sweep(int n, std::span<const double> rho_grid,
                                        std::span<const double> kappa_grid,
                                        std::span<const double> t_grid,
                                        const LatticeConfig& config, std::size_t replicas,
                                        std::uint64_t seed, const DualOptions& opts = {});

}  // namespace sbm

#endif
