#include "risim/random.hpp"

#include <cmath>

#include "risim/units.hpp"

namespace risim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

std::uint64_t RandomStream::uniform_below(std::uint64_t n) {
  const std::uint64_t threshold = (-n) % n;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % n;
  }
}

double RandomStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = two_pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::complex<double> RandomStream::complex_gaussian(double mean_square) {
  if (mean_square <= 0.0) return {0.0, 0.0};
  const double s = std::sqrt(mean_square / 2.0);
  const double re = gaussian();
  const double im = gaussian();
  return {s * re, s * im};
}

RandomStream RandomStream::substream(std::uint64_t index) const {
  const std::uint64_t child = splitmix64(splitmix64(seed_) ^ splitmix64(index + 0x243F6A8885A308D3ULL));
  return RandomStream(child);
}

}  // namespace risim
