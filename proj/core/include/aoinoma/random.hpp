#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace aoinoma {

using Rng = std::mt19937_64;

/// Derives an independent stream seed so that consumers (environment,
/// agent, policy) can draw without perturbing each other.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
}

inline Rng derive_rng(std::uint64_t seed, std::uint64_t salt) {
  return Rng(derive_seed(seed, salt));
}

inline double standard_normal(Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

/// Unit-variance circularly symmetric complex Gaussian sample
/// (real and imaginary parts each have variance 1/2).
inline std::complex<double> standard_complex_normal(Rng& rng) {
  const double re = standard_normal(rng);
  const double im = standard_normal(rng);
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng);
}

}  // namespace aoinoma
