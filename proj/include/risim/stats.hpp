#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace risim {

/// Cascade (pairwise-tree) summation with a fixed layout, so the result
/// depends only on the element order, never on how the values were produced.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);

/// Unbiased sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> values);

struct MeanEstimate {
  double mean = 0.0;
  double halfwidth = 0.0;  // 1.96 standard errors
};

MeanEstimate mean_with_ci(std::span<const double> values);

/// Shortest representation with six significant digits, locale-independent.
std::string format_sig6(double value);

}  // namespace risim
