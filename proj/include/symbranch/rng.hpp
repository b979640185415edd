#ifndef SYMBRANCH_RNG_HPP
#define SYMBRANCH_RNG_HPP

#include <cstdint>
#include <span>
#include <stdexcept>

namespace sbm {

// Seeded random stream with explicit multi-stream support.
//
// Generator: PCG64 ("setseq" variant, 128-bit LCG state + XSL-RR output).
// Streams are selected through the LCG increment, so distinct stream ids
// give structurally distinct sequences; (seed, stream_id) fully determines
// the draw sequence, bit for bit, on every platform.
//
// Seeding: the 128-bit initial state is built from two successive
// SplitMix64 outputs of `seed`; the increment is (stream_id << 1) | 1.
//
// Normal variates use the Wichura AS241 (PPND16) inverse normal CDF applied
// to one 53-bit uniform per draw, so a ported generator that reproduces the
// uint64 sequence reproduces the normal sequence exactly.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();

  // Uniform on the open interval (0,1): ((x >> 11) + 0.5) * 2^-53.
  double next_uniform();

  // Standard normal via inverse-CDF of next_uniform().
  double next_normal();

  // Uniform integer in [0, n) by rejection-free multiply-shift on 64 bits
  // followed by rejection of the biased region (Lemire's method).
  std::uint64_t next_below(std::uint64_t n);

 private:
  unsigned __int128 state_;
  unsigned __int128 inc_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

// Inverse of the standard normal CDF (AS241 PPND16, ~1e-15 relative).
// Throws std::domain_error outside (0,1).
double inverse_normal_cdf(double p);

// One pair of Brownian increments over a step dt with correlation rho:
//   dW1 = sqrt(dt) Z1,  dW2 = sqrt(dt) (rho Z1 + sqrt(1-rho^2) Z2).
// Z1 is always drawn first.
struct IncrementPair {
  double dw1;
  double dw2;
};
IncrementPair correlated_pair_increment(double rho, double dt, RngStream& rng);

// Per-site correlated increments for n_sites independent sites. Sites are
// filled in index order, Z1 before Z2 within a site.
void correlated_field_increments(double rho, double dt, std::span<double> dw1,
                                 std::span<double> dw2, RngStream& rng);

}  // namespace sbm

#endif
