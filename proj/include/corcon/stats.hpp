#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace corcon {

/// Tukey boxplot summary of a sample.
struct SummaryStats {
  std::size_t n = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  /// Most extreme samples inside [q1 - 1.5 IQR, q3 + 1.5 IQR].
  double lower_whisker = 0.0;
  double upper_whisker = 0.0;
  /// Samples beyond the whiskers, in ascending order.
  std::vector<double> outliers;
  /// Mean after winsorizing every outlier to its nearest whisker.
  double smoothed_mean = 0.0;
};

/// Elementwise max(x, 0).
std::vector<double> clamp_negatives(std::span<const double> samples);

/// Quantile of sorted data by linear interpolation between order
/// statistics at position p * (n - 1).
double quantile_sorted(std::span<const double> sorted, double p);

/// Throws ValidationError on an empty sample.
SummaryStats summarize(std::span<const double> samples);

/// Unbiased sample variance (n - 1 denominator); 0 for a single sample.
double sample_variance(std::span<const double> samples);

}  // namespace corcon
