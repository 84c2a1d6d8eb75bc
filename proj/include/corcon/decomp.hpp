#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "corcon/tensor.hpp"

namespace corcon {

/// Stopping rules and randomness for iterative fits.
struct FitConfig {
  int max_iterations = 500;
  /// Stop once the relative change of the residual norm between sweeps,
  /// |e_{t-1} - e_t| / e_{t-1}, falls below this (or e_t reaches 1e-14).
  double rel_tolerance = 1e-8;
  /// Independent random initializations for CP-ALS; the best fit wins.
  int restarts = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

/// PARAFAC model X ~ sum_r a_r o b_r o c_r.
struct CpModel {
  Matrix a;  // I x R, unit-norm columns
  Matrix b;  // J x R, unit-norm columns
  Matrix c;  // K x R, carries the component scales
  /// 1 - ||X - reconstruction||_F / ||X||_F.
  double fit = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Relative reconstruction error after every ALS sweep of the winning restart.
  std::vector<double> error_history;

  std::size_t rank() const noexcept { return static_cast<std::size_t>(a.cols()); }
};

/// TUCKER3 model X ~ core x_1 A x_2 B x_3 C with orthonormal-column factors.
struct TuckerModel {
  DenseTensor3 core;
  Matrix a;
  Matrix b;
  Matrix c;
  /// Absent when the model was not fitted against data.
  std::optional<double> fit;
  int iterations = 0;
  bool converged = false;
};

/// Thin SVD with a fixed sign convention: the largest-magnitude entry of
/// every left singular vector is positive (right vectors flipped to match).
struct Svd {
  Matrix u;
  Vector s;
  Matrix v;
};
Svd thin_svd(const Matrix& m);

/// Moore-Penrose pseudoinverse via SVD. Singular values <= tol count as zero;
/// the default tol is max(rows, cols) * eps * sigma_max.
Matrix pseudoinverse(const Matrix& m, std::optional<double> tol = std::nullopt);

/// Number of singular values above the pseudoinverse default tolerance.
Eigen::Index numerical_rank(const Matrix& m);

/// Reduced QR with a positive diagonal in R. Throws RankDeficiencyError
/// (tagged with `mode`) if some |R_ii| <= 1e-12 * max_j |R_jj|.
struct ReducedQr {
  Matrix q;
  Matrix r;
};
ReducedQr reduced_qr(const Matrix& m, int mode = 0);

/// Column-wise Khatri-Rao product: row (i + rows(right) * k) of column r is
/// left(k, r) * right(i, r).
Matrix khatri_rao(const Matrix& left, const Matrix& right);

/// Rank-R PARAFAC fit by alternating least squares, best of cfg.restarts.
/// Throws DegenerateInputError on the zero tensor.
CpModel cp_als(const DenseTensor3& x, std::size_t rank, const FitConfig& cfg = {});

/// TUCKER3 fit: HOSVD initialization refined by higher-order orthogonal
/// iteration. Deterministic; cfg.seed is not consulted.
TuckerModel tucker3(const DenseTensor3& x, const Dims& target, const FitConfig& cfg = {});

/// Re-expresses a TUCKER3 model with tall factors through their reduced QR:
/// G x_1 Q_A R_A x_2 Q_B R_B x_3 Q_C R_C = (G x_1 R_A x_2 R_B x_3 R_C) x_1 Q_A ...
TuckerModel orthonormalize_tucker(const DenseTensor3& core, const Matrix& a, const Matrix& b,
                                  const Matrix& c);

/// 1 - ||X - model||_F / ||X||_F.
double cp_fit(const DenseTensor3& x, const Matrix& a, const Matrix& b, const Matrix& c);

}  // namespace corcon
