#ifndef SEMCOM_RNG_HPP
#define SEMCOM_RNG_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <string_view>

namespace semcom {

/// Deterministic 64-bit generator (xoshiro256**) with named substreams.
///
/// Output is bit-identical across platforms for a given seed: only integer
/// arithmetic is used for the raw stream, uniforms are built from the top
/// 53 bits, and Gaussians use Box-Muller. Standard library distributions are
/// deliberately avoided since their algorithms are implementation-defined.
///
/// Substreams: `Rng::derive(seed, tag, index...)` hashes the parent seed, an
/// FNV-1a hash of `tag`, and each index through splitmix64. Two derivations
/// with different (tag, index) tuples are statistically independent, and a
/// trial's stream never depends on how many other trials are run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng derive(std::uint64_t seed, std::string_view tag, std::uint64_t i0 = 0,
                    std::uint64_t i1 = 0, std::uint64_t i2 = 0);
  static std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t i0 = 0,
                                   std::uint64_t i1 = 0, std::uint64_t i2 = 0);

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, n). Unbiased (rejection sampling).
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();
  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_normal(double variance);

  /// Marsaglia-Tsang gamma sampler, shape > 0, unit scale.
  double gamma(double shape);
  double beta(double a, double b);
  /// Knuth's multiplication method; intended for small means.
  std::uint64_t poisson(double mean);

 private:
  std::array<std::uint64_t, 4> s_{};
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a(std::string_view s);

}  // namespace semcom

#endif  // SEMCOM_RNG_HPP
