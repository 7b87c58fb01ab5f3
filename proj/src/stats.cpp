#include "risim/stats.hpp"

#include <charconv>
#include <cmath>
#include <vector>

namespace risim {

namespace {

double pairwise_block(const double* v, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_block(v, half) + pairwise_block(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_block(values.data(), values.size());
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return pairwise_sum(values) / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  const double m = mean(values);
  double s = 0.0;
  // Two-pass; the squared deviations are accumulated pairwise as well.
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - m;
    sq[i] = d * d;
  }
  s = pairwise_sum(sq);
  return s / static_cast<double>(n - 1);
}

MeanEstimate mean_with_ci(std::span<const double> values) {
  MeanEstimate e;
  e.mean = mean(values);
  const std::size_t n = values.size();
  if (n >= 2) {
    e.halfwidth = 1.96 * std::sqrt(sample_variance(values) / static_cast<double>(n));
  }
  return e;
}

std::string format_sig6(double value) {
  char buf[48];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 6);
  return std::string(buf, ptr);
}

}  // namespace risim
