#pragma once

#include <cstdint>
#include <string_view>

#include "corcon/tensor.hpp"

namespace corcon {

enum class FactorDistribution { uniform, gaussian };

FactorDistribution parse_distribution(std::string_view name);
std::string_view to_string(FactorDistribution dist);

/// Low-rank trilinear tensor plus scaled Gaussian noise.
struct SynthSpec {
  Dims dims{268, 44, 7};
  std::size_t rank = 3;
  /// ||E||_F / ||X_clean||_F.
  double noise_level = 0.0;
  /// uniform draws factors on [0, 1); gaussian draws standard normals.
  FactorDistribution factor_distribution = FactorDistribution::gaussian;
  std::uint64_t seed = 0;
};

/// The clean part reconstruct_cp(A, B, C) and its factors.
struct SynthFactors {
  Matrix a;
  Matrix b;
  Matrix c;
};

/// Draws A, B, C (in that order, row by row) and then E from one stream
/// seeded by spec.seed.
DenseTensor3 synth_tensor(const SynthSpec& spec, SynthFactors* factors = nullptr);

}  // namespace corcon
