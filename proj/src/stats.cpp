#include "corcon/stats.hpp"

#include <algorithm>
#include <cmath>

#include "corcon/errors.hpp"

namespace corcon {

std::vector<double> clamp_negatives(std::span<const double> samples) {
  std::vector<double> out(samples.begin(), samples.end());
  for (double& v : out) v = std::max(v, 0.0);
  return out;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ValidationError("quantile of an empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

SummaryStats summarize(std::span<const double> samples) {
  if (samples.empty()) throw ValidationError("cannot summarize an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  SummaryStats s;
  s.n = sorted.size();
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);

  const double iqr = s.q3 - s.q1;
  const double low_fence = s.q1 - 1.5 * iqr;
  const double high_fence = s.q3 + 1.5 * iqr;

  // The fences bracket the quartiles, so both searches find a sample.
  s.lower_whisker = *std::lower_bound(sorted.begin(), sorted.end(), low_fence);
  s.upper_whisker = *(std::upper_bound(sorted.begin(), sorted.end(), high_fence) - 1);

  double sum = 0.0;
  for (double v : sorted) {
    if (v < s.lower_whisker || v > s.upper_whisker) s.outliers.push_back(v);
    sum += std::clamp(v, s.lower_whisker, s.upper_whisker);
  }
  s.smoothed_mean = sum / static_cast<double>(s.n);
  return s;
}

double sample_variance(std::span<const double> samples) {
  if (samples.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(samples.size());
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(samples.size() - 1);
}

}  // namespace corcon
