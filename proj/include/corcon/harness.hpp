#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "corcon/compress.hpp"
#include "corcon/corcondia.hpp"
#include "corcon/decomp.hpp"
#include "corcon/stats.hpp"

namespace corcon {

/// Monte Carlo grid: every (scheme, ratio) cell draws samples_per_cell[scheme]
/// compressed tensors and records the CORCONDIA of a rank-`rank` fit.
struct ExperimentConfig {
  std::size_t rank = 3;
  std::vector<Scheme> schemes{Scheme::gaussian, Scheme::orthonormal, Scheme::tucker};
  std::vector<double> ratios{0.5, 0.4, 0.3, 0.2, 0.1, 0.08, 0.04};
  std::map<Scheme, std::size_t> samples_per_cell{
      {Scheme::gaussian, 1000}, {Scheme::orthonormal, 1000}, {Scheme::tucker, 10}};
  ModeSet compressed_modes{true, true, false};
  std::uint64_t master_seed = 0;
  FitConfig fit;

  std::size_t samples_for(Scheme scheme) const;
  void validate() const;
};

struct CellResult {
  Scheme scheme = Scheme::gaussian;
  double ratio = 1.0;
  Dims compressed_dims{};
  std::vector<double> raw_samples;
  /// max(raw, 0) elementwise.
  std::vector<double> clamped_samples;
  /// Summary of clamped_samples.
  SummaryStats stats;
};

struct ExperimentResult {
  ExperimentConfig config;
  /// CORCONDIA of the uncompressed tensor at config.rank.
  CorcondiaReport baseline;
  /// Ordered by config.schemes, then config.ratios.
  std::vector<CellResult> cells;
};

/// Seed of sample `sample` in cell (scheme, ratio):
/// derive_seed({master, scheme id, round(ratio * 10000), sample}).
/// It seeds the random operator; the CP-ALS fit of that sample uses
/// derive_seed({sample seed, 1}).
std::uint64_t sample_seed(std::uint64_t master_seed, Scheme scheme, double ratio,
                          std::size_t sample);

/// Seed of the baseline CP-ALS fit on the uncompressed tensor.
std::uint64_t baseline_seed(std::uint64_t master_seed);

/// Runs the grid on `threads` workers (0 picks the hardware concurrency).
/// The result depends only on (x, cfg); threads only changes wall time.
/// Throws ValidationError before any fitting if some cell cannot support
/// cfg.rank.
ExperimentResult run_experiment(const DenseTensor3& x, const ExperimentConfig& cfg,
                                unsigned threads = 1);

}  // namespace corcon
