#pragma once

#include <cstddef>
#include <vector>

#include "corcon/decomp.hpp"
#include "corcon/tensor.hpp"

namespace corcon {

/// Core consistency of a PARAFAC model.
struct CorcondiaReport {
  /// (1 - ||I - G||^2 / ||I||^2) * 100; at most 100, unbounded below.
  double value = 0.0;
  /// Least-squares core G (R x R x R).
  DenseTensor3 core{Dims{1, 1, 1}};
  std::size_t rank = 0;
  /// Set when some factor matrix was numerically rank deficient, so the
  /// pseudoinverse dropped singular values while forming the core.
  bool rank_deficient = false;
};

/// Minimum-norm least-squares core: X x_1 A^+ x_2 B^+ x_3 C^+.
DenseTensor3 corcondia_core(const DenseTensor3& x, const Matrix& a, const Matrix& b,
                            const Matrix& c);

/// Diagnostic value of an R x R x R core against the superdiagonal identity.
double core_consistency(const DenseTensor3& core);

CorcondiaReport corcondia(const DenseTensor3& x, const Matrix& a, const Matrix& b,
                          const Matrix& c);
CorcondiaReport corcondia(const DenseTensor3& x, const CpModel& model);

/// One independent CP-ALS fit and report per rank, in input order. The fit
/// for rank R is seeded with derive_seed({cfg.seed, R}).
std::vector<CorcondiaReport> corcondia_sweep(const DenseTensor3& x,
                                             const std::vector<std::size_t>& ranks,
                                             const FitConfig& cfg = {});

}  // namespace corcon
