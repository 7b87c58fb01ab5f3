#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace risim {

/// Deterministic random stream. The engine is mt19937_64 (whose output
/// sequence is pinned by the standard) and every transform on top of it is
/// implemented here, so a given seed yields identical draws on any platform
/// and standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01();
  double uniform(double lo, double hi);

  /// Uniform integer in [0, n); n must be nonzero.
  std::uint64_t uniform_below(std::uint64_t n);

  /// Standard normal via Box-Muller (pairs cached).
  double gaussian();

  /// Circularly symmetric complex Gaussian with E[|z|^2] = mean_square.
  /// mean_square <= 0 yields exactly zero without consuming draws.
  std::complex<double> complex_gaussian(double mean_square);

  /// Independent child stream; children with distinct indices are
  /// statistically independent of each other and of the parent.
  RandomStream substream(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace risim
