#include "corcon/synth.hpp"

#include <algorithm>
#include <string>

#include "corcon/rng.hpp"

namespace corcon {

FactorDistribution parse_distribution(std::string_view name) {
  if (name == "uniform") return FactorDistribution::uniform;
  if (name == "gaussian") return FactorDistribution::gaussian;
  throw ValidationError("unknown factor distribution '" + std::string(name) + "'");
}

std::string_view to_string(FactorDistribution dist) {
  return dist == FactorDistribution::uniform ? "uniform" : "gaussian";
}

DenseTensor3 synth_tensor(const SynthSpec& spec, SynthFactors* factors) {
  const Dims& d = spec.dims;
  if (std::find(d.begin(), d.end(), std::size_t{0}) != d.end()) {
    throw ValidationError("synthetic tensor dims must be positive");
  }
  const std::size_t limit = std::min({d[1] * d[2], d[0] * d[2], d[0] * d[1]});
  if (spec.rank < 1 || spec.rank > limit) {
    throw ValidationError("rank " + std::to_string(spec.rank) + " is infeasible for " +
                          to_string(d) + " (must lie in [1, " + std::to_string(limit) + "])");
  }
  if (!(spec.noise_level >= 0.0)) throw ValidationError("noise level must be >= 0");

  Rng rng(spec.seed);
  const auto r = static_cast<Eigen::Index>(spec.rank);
  auto draw = [&](std::size_t rows) {
    const auto n = static_cast<Eigen::Index>(rows);
    return spec.factor_distribution == FactorDistribution::uniform
               ? uniform_matrix(rng, n, r, 0.0, 1.0)
               : gaussian_matrix(rng, n, r);
  };
  Matrix a = draw(d[0]);
  Matrix b = draw(d[1]);
  Matrix c = draw(d[2]);
  DenseTensor3 clean = reconstruct_cp(a, b, c);
  if (factors != nullptr) *factors = SynthFactors{a, b, c};
  if (spec.noise_level == 0.0) return clean;

  const Matrix e = gaussian_matrix(rng, static_cast<Eigen::Index>(clean.size()), 1);
  const double scale = spec.noise_level * frobenius_norm(clean) / e.norm();
  std::vector<double> values(clean.values().begin(), clean.values().end());
  for (std::size_t n = 0; n < values.size(); ++n)
    values[n] += scale * e(static_cast<Eigen::Index>(n), 0);
  return DenseTensor3(d, std::move(values));
}

}  // namespace corcon
