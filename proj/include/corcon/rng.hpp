#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "corcon/tensor.hpp"

namespace corcon {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds a tuple of integers into one seed: h = mix64(h ^ part) for each part,
/// starting from h = 0. Any element of a seeded experiment can be recomputed
/// in isolation from its tuple.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = 0;
  for (std::uint64_t p : parts) h = mix64(h ^ p);
  return h;
}

using Rng = std::mt19937_64;

/// rows x cols matrix of i.i.d. standard normal draws, filled row by row.
Matrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);

/// rows x cols matrix of i.i.d. uniform draws on [lo, hi), filled row by row.
Matrix uniform_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo, double hi);

}  // namespace corcon
