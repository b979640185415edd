#include "symbranch/rng.hpp"

#include <cmath>

namespace sbm {

namespace {

using u128 = unsigned __int128;

// PCG64 LCG multiplier (O'Neill, pcg64_setseq).
constexpr u128 kPcgMult = (u128{0x2360ed051fc65da4ull} << 64) | 0x4385df649fccf645ull;

std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t rotr64(std::uint64_t v, unsigned r) {
  return (v >> r) | (v << ((64u - r) & 63u));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t s = seed;
  const std::uint64_t hi = splitmix64(s);
  const std::uint64_t lo = splitmix64(s);
  const u128 initstate = (u128{hi} << 64) | lo;
  inc_ = (u128{stream_id} << 1) | 1u;
  state_ = 0;
  state_ = state_ * kPcgMult + inc_;
  state_ += initstate;
  state_ = state_ * kPcgMult + inc_;
}

std::uint64_t RngStream::next_u64() {
  state_ = state_ * kPcgMult + inc_;
  const std::uint64_t hi = static_cast<std::uint64_t>(state_ >> 64);
  const std::uint64_t lo = static_cast<std::uint64_t>(state_);
  const unsigned rot = static_cast<unsigned>(state_ >> 122);
  return rotr64(hi ^ lo, rot);
}

double RngStream::next_uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_normal() { return inverse_normal_cdf(next_uniform()); }

std::uint64_t RngStream::next_below(std::uint64_t n) {
  // Lemire multiply-shift with rejection; unbiased for any n >= 1.
  if (n == 0) throw std::domain_error("next_below: n must be positive");
  std::uint64_t x = next_u64();
  u128 m = u128{x} * n;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < n) {
    const std::uint64_t t = (0 - n) % n;
    while (lo < t) {
      x = next_u64();
      m = u128{x} * n;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double inverse_normal_cdf(double p) {
  // Wichura (1988), algorithm AS241, routine PPND16.
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("inverse_normal_cdf: p outside (0,1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
              6.7265770927008700853e4) * r +
             4.5921953931549871457e4) * r +
            1.3731693765509461125e4) * r +
           1.9715909503065514427e3) * r +
          1.3314166789178437745e2) * r +
         3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) * r +
             2.1213794301586595867e4) * r +
            5.3941960214247511077e3) * r +
           6.8718700749205790830e2) * r +
          4.2313330701600911252e1) * r +
         1.0);
    return q * num / den;
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r +
             1.27045825245236838258e0) * r +
            3.64784832476320460504e0) * r +
           5.76949722146069140550e0) * r +
          4.63033784615654529590e0) * r +
         1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r +
             1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r +
           1.67638483018380384940e0) * r +
          2.05319162663775882187e0) * r +
         1.0);
    x = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r +
             2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r +
           1.78482653991729133580e0) * r +
          5.46378491116411436990e0) * r +
         6.65790464350110377720e0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r +
             7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r +
           1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r +
         1.0);
    x = num / den;
  }
  return (q < 0.0) ? -x : x;
}

IncrementPair correlated_pair_increment(double rho, double dt, RngStream& rng) {
  if (!(dt > 0.0)) throw std::invalid_argument("correlated increments: dt must be positive");
  if (!(rho >= -1.0 && rho <= 1.0))
    throw std::invalid_argument("correlated increments: |rho| must be <= 1");
  const double sdt = std::sqrt(dt);
  const double z1 = rng.next_normal();
  const double z2 = rng.next_normal();
  const double c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  return {sdt * z1, sdt * (rho * z1 + c * z2)};
}

void correlated_field_increments(double rho, double dt, std::span<double> dw1,
                                 std::span<double> dw2, RngStream& rng) {
  if (!(dt > 0.0)) throw std::invalid_argument("correlated increments: dt must be positive");
  if (!(rho >= -1.0 && rho <= 1.0))
    throw std::invalid_argument("correlated increments: |rho| must be <= 1");
  if (dw1.size() != dw2.size() || dw1.empty())
    throw std::invalid_argument("correlated increments: need n_sites >= 1");
  const double sdt = std::sqrt(dt);
  const double c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  for (std::size_t i = 0; i < dw1.size(); ++i) {
    const double z1 = rng.next_normal();
    const double z2 = rng.next_normal();
    dw1[i] = sdt * z1;
    dw2[i] = sdt * (rho * z1 + c * z2);
  }
}

}  // namespace sbm
