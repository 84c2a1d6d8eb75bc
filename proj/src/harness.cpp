#include "corcon/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "corcon/rng.hpp"

namespace corcon {

namespace {

std::uint64_t scheme_id(Scheme scheme) {
  switch (scheme) {
    case Scheme::gaussian:
      return 1;
    case Scheme::orthonormal:
      return 2;
    case Scheme::tucker:
      return 3;
  }
  return 0;
}

std::size_t max_feasible_rank(const Dims& d) {
  return std::min({d[1] * d[2], d[0] * d[2], d[0] * d[1]});
}

struct WorkItem {
  std::size_t cell = 0;
  std::size_t sample = 0;
};

}  // namespace

std::size_t ExperimentConfig::samples_for(Scheme scheme) const {
  const auto it = samples_per_cell.find(scheme);
  return it == samples_per_cell.end() ? 0 : it->second;
}

void ExperimentConfig::validate() const {
  fit.validate();
  if (rank < 1) throw ValidationError("experiment rank must be >= 1");
  if (schemes.empty()) throw ValidationError("experiment needs at least one scheme");
  if (ratios.empty()) throw ValidationError("experiment needs at least one ratio");
  for (Scheme s : schemes) {
    if (samples_for(s) < 1) {
      throw ValidationError("scheme " + std::string(to_string(s)) + " needs >= 1 sample per cell");
    }
  }
  for (double r : ratios) {
    if (!(r > 0.0 && r <= 1.0)) {
      throw ValidationError("compression ratio must lie in (0, 1], got " + std::to_string(r));
    }
  }
}

std::uint64_t sample_seed(std::uint64_t master_seed, Scheme scheme, double ratio,
                          std::size_t sample) {
  const auto basis_points = static_cast<std::uint64_t>(std::llround(ratio * 10000.0));
  return derive_seed({master_seed, scheme_id(scheme), basis_points,
                      static_cast<std::uint64_t>(sample)});
}

std::uint64_t baseline_seed(std::uint64_t master_seed) {
  return derive_seed({master_seed, 0});
}

ExperimentResult run_experiment(const DenseTensor3& x, const ExperimentConfig& cfg,
                                unsigned threads) {
  cfg.validate();

  ExperimentResult result;
  result.config = cfg;
  for (Scheme scheme : cfg.schemes) {
    for (double ratio : cfg.ratios) {
      CellResult cell;
      cell.scheme = scheme;
      cell.ratio = ratio;
      cell.compressed_dims = ratio_to_dims(x.dims(), RatioSpec{ratio, cfg.compressed_modes});
      if (cfg.rank > max_feasible_rank(cell.compressed_dims)) {
        throw ValidationError("rank " + std::to_string(cfg.rank) + " is infeasible for the " +
                              to_string(cell.compressed_dims) + " tensor of scheme " +
                              std::string(to_string(scheme)) + " at ratio " +
                              std::to_string(ratio));
      }
      cell.raw_samples.assign(cfg.samples_for(scheme), 0.0);
      result.cells.push_back(std::move(cell));
    }
  }

  FitConfig base_fit = cfg.fit;
  base_fit.seed = baseline_seed(cfg.master_seed);
  result.baseline = corcondia(x, cp_als(x, cfg.rank, base_fit));

  // The Tucker operator is deterministic, so one fit per cell serves every sample.
  std::vector<std::optional<CompressionOperator>> tucker_ops(result.cells.size());
  for (std::size_t c = 0; c < result.cells.size(); ++c) {
    if (result.cells[c].scheme == Scheme::tucker) {
      tucker_ops[c] = tucker_operator(x, result.cells[c].compressed_dims, cfg.fit);
    }
  }

  std::vector<WorkItem> work;
  for (std::size_t c = 0; c < result.cells.size(); ++c)
    for (std::size_t s = 0; s < result.cells[c].raw_samples.size(); ++s) work.push_back({c, s});

  auto run_item = [&](const WorkItem& item) {
    CellResult& cell = result.cells[item.cell];
    const std::uint64_t seed = sample_seed(cfg.master_seed, cell.scheme, cell.ratio, item.sample);
    DenseTensor3 compressed = [&] {
      switch (cell.scheme) {
        case Scheme::gaussian:
          return compress(x, gaussian_operator(x.dims(), cell.compressed_dims, seed,
                                               cfg.compressed_modes));
        case Scheme::orthonormal:
          return compress(x, orthonormal_operator(x.dims(), cell.compressed_dims, seed,
                                                  cfg.compressed_modes));
        case Scheme::tucker:
          break;
      }
      return compress(x, *tucker_ops[item.cell]);
    }();
    FitConfig fit = cfg.fit;
    fit.seed = derive_seed({seed, 1});
    cell.raw_samples[item.sample] = corcondia(compressed, cp_als(compressed, cfg.rank, fit)).value;
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, work.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t n = next++; n < work.size(); n = next++) {
      try {
        run_item(work[n]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = work.size();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (CellResult& cell : result.cells) {
    cell.clamped_samples = clamp_negatives(cell.raw_samples);
    cell.stats = summarize(cell.clamped_samples);
  }
  return result;
}

}  // namespace corcon
