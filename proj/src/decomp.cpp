#include "corcon/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "corcon/rng.hpp"

namespace corcon {

namespace {

// Flips column pairs so the largest-magnitude entry of each column of u is positive.
void fix_signs(Matrix& u, Matrix* v) {
  for (Eigen::Index col = 0; col < u.cols(); ++col) {
    Eigen::Index at = 0;
    u.col(col).cwiseAbs().maxCoeff(&at);
    if (u(at, col) < 0.0) {
      u.col(col) *= -1.0;
      if (v != nullptr && col < v->cols()) v->col(col) *= -1.0;
    }
  }
}

double default_tolerance(const Matrix& m, const Vector& s) {
  const double largest = s.size() > 0 ? s(0) : 0.0;
  return static_cast<double>(std::max(m.rows(), m.cols())) *
         std::numeric_limits<double>::epsilon() * largest;
}

// Leading `count` left singular vectors; falls back to the full U when
// `count` exceeds min(rows, cols).
Matrix leading_left_singular_vectors(const Matrix& m, Eigen::Index count) {
  if (count <= std::min(m.rows(), m.cols())) {
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
    Matrix u = svd.matrixU().leftCols(count);
    fix_signs(u, nullptr);
    return u;
  }
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullU);
  Matrix u = svd.matrixU().leftCols(count);
  fix_signs(u, nullptr);
  return u;
}

void normalize_columns(Matrix& m) {
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    const double n = m.col(col).norm();
    if (n > 0.0) m.col(col) /= n;
  }
}

Matrix gram_hadamard(const Matrix& x, const Matrix& y) {
  return (x.transpose() * x).cwiseProduct(y.transpose() * y);
}

// Relative residual at which a fit counts as exact to working precision.
constexpr double kExactFloor = 1e-14;

struct AlsRun {
  Matrix a, b, c;
  std::vector<double> errors;
  int iterations = 0;
  bool converged = false;
};

AlsRun run_als(const Matrix& x1, const Matrix& x2, const Matrix& x3, double x_norm,
               const Dims& dims, Eigen::Index rank, const FitConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  AlsRun run;
  run.a = uniform_matrix(rng, static_cast<Eigen::Index>(dims[0]), rank, -1.0, 1.0);
  run.b = uniform_matrix(rng, static_cast<Eigen::Index>(dims[1]), rank, -1.0, 1.0);
  run.c = uniform_matrix(rng, static_cast<Eigen::Index>(dims[2]), rank, -1.0, 1.0);

  double previous_error = 0.0;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    run.a = x1 * khatri_rao(run.c, run.b) * pseudoinverse(gram_hadamard(run.c, run.b));
    normalize_columns(run.a);
    run.b = x2 * khatri_rao(run.c, run.a) * pseudoinverse(gram_hadamard(run.c, run.a));
    normalize_columns(run.b);
    const Matrix kr_ba = khatri_rao(run.b, run.a);
    run.c = x3 * kr_ba * pseudoinverse(gram_hadamard(run.b, run.a));

    const double err = (x3 - run.c * kr_ba.transpose()).norm() / x_norm;
    run.errors.push_back(err);
    run.iterations = it;
    if (err <= kExactFloor ||
        (it > 1 && std::abs(previous_error - err) < cfg.rel_tolerance * previous_error)) {
      run.converged = true;
      break;
    }
    previous_error = err;
  }
  return run;
}

}  // namespace

void FitConfig::validate() const {
  if (max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
  if (!(rel_tolerance > 0.0)) throw ValidationError("rel_tolerance must be > 0");
  if (restarts < 1) throw ValidationError("restarts must be >= 1");
}

Svd thin_svd(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Svd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  fix_signs(out.u, &out.v);
  return out;
}

Matrix pseudoinverse(const Matrix& m, std::optional<double> tol) {
  if (m.size() == 0) throw ShapeError("pseudoinverse of an empty matrix");
  if (tol && *tol < 0.0) throw ValidationError("pseudoinverse tolerance must be >= 0");
  const Svd svd = thin_svd(m);
  const double cutoff = tol.value_or(default_tolerance(m, svd.s));
  Vector inv_s = Vector::Zero(svd.s.size());
  for (Eigen::Index n = 0; n < svd.s.size(); ++n) {
    if (svd.s(n) > cutoff) inv_s(n) = 1.0 / svd.s(n);
  }
  return svd.v * inv_s.asDiagonal() * svd.u.transpose();
}

Eigen::Index numerical_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  const double cutoff = default_tolerance(m, s);
  return (s.array() > cutoff).count();
}

ReducedQr reduced_qr(const Matrix& m, int mode) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  const std::string where = mode > 0 ? " in mode " + std::to_string(mode) : std::string();
  if (rows < cols || cols == 0) {
    throw ShapeError("reduced QR needs a tall matrix" + where + ", got " + std::to_string(rows) +
                     "x" + std::to_string(cols));
  }
  Eigen::HouseholderQR<Matrix> qr(m);
  ReducedQr out;
  out.q = qr.householderQ() * Matrix::Identity(rows, cols);
  out.r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();

  const double largest = out.r.diagonal().cwiseAbs().maxCoeff();
  for (Eigen::Index n = 0; n < cols; ++n) {
    if (std::abs(out.r(n, n)) <= 1e-12 * largest || largest == 0.0) {
      throw RankDeficiencyError(mode, "factor matrix is rank deficient" + where);
    }
    if (out.r(n, n) < 0.0) {
      out.r.row(n) *= -1.0;
      out.q.col(n) *= -1.0;
    }
  }
  return out;
}

Matrix khatri_rao(const Matrix& left, const Matrix& right) {
  if (left.cols() != right.cols()) {
    throw ShapeError("Khatri-Rao product needs equal column counts");
  }
  const Eigen::Index nr = right.rows();
  Matrix out(left.rows() * nr, left.cols());
  for (Eigen::Index col = 0; col < left.cols(); ++col)
    for (Eigen::Index k = 0; k < left.rows(); ++k)
      out.col(col).segment(k * nr, nr) = left(k, col) * right.col(col);
  return out;
}

double cp_fit(const DenseTensor3& x, const Matrix& a, const Matrix& b, const Matrix& c) {
  const double x_norm = frobenius_norm(x);
  if (x_norm == 0.0) throw DegenerateInputError("fit is undefined for the zero tensor");
  return 1.0 - frobenius_norm(subtract(x, reconstruct_cp(a, b, c))) / x_norm;
}

CpModel cp_als(const DenseTensor3& x, std::size_t rank, const FitConfig& cfg) {
  cfg.validate();
  const Dims& d = x.dims();
  const std::size_t limit = std::min({d[1] * d[2], d[0] * d[2], d[0] * d[1]});
  if (rank < 1 || rank > limit) {
    throw ValidationError("rank " + std::to_string(rank) + " is infeasible for a " + to_string(d) +
                          " tensor (must lie in [1, " + std::to_string(limit) + "])");
  }
  const double x_norm = frobenius_norm(x);
  if (x_norm == 0.0) throw DegenerateInputError("cannot fit PARAFAC to the zero tensor");

  const Matrix x1 = unfold(x, 1);
  const Matrix x2 = unfold(x, 2);
  const Matrix x3 = unfold(x, 3);
  const auto r = static_cast<Eigen::Index>(rank);

  AlsRun best;
  double best_error = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    AlsRun run = run_als(x1, x2, x3, x_norm, d, r, cfg,
                         derive_seed({cfg.seed, static_cast<std::uint64_t>(restart)}));
    if (run.errors.back() < best_error) {
      best_error = run.errors.back();
      best = std::move(run);
    }
  }

  CpModel model;
  model.a = std::move(best.a);
  model.b = std::move(best.b);
  model.c = std::move(best.c);
  model.iterations = best.iterations;
  model.converged = best.converged;
  model.error_history = std::move(best.errors);
  model.fit = cp_fit(x, model.a, model.b, model.c);
  return model;
}

TuckerModel tucker3(const DenseTensor3& x, const Dims& target, const FitConfig& cfg) {
  cfg.validate();
  const Dims& d = x.dims();
  for (int m = 0; m < 3; ++m) {
    if (target[m] < 1 || target[m] > d[m]) {
      throw ShapeError("TUCKER3 target " + to_string(target) + " exceeds tensor " + to_string(d));
    }
  }
  const double x_norm = frobenius_norm(x);
  if (x_norm == 0.0) throw DegenerateInputError("cannot fit TUCKER3 to the zero tensor");

  const auto p = static_cast<Eigen::Index>(target[0]);
  const auto q = static_cast<Eigen::Index>(target[1]);
  const auto r = static_cast<Eigen::Index>(target[2]);

  // HOSVD initialization.
  Matrix a = leading_left_singular_vectors(unfold(x, 1), p);
  Matrix b = leading_left_singular_vectors(unfold(x, 2), q);
  Matrix c = leading_left_singular_vectors(unfold(x, 3), r);

  TuckerModel model{n_mode_product(n_mode_product(n_mode_product(x, a.transpose(), 1),
                                                  b.transpose(), 2),
                                   c.transpose(), 3),
                    a, b, c, std::nullopt, 0, false};

  auto estimated_fit = [&](const DenseTensor3& core) {
    const double g = frobenius_norm(core);
    return 1.0 - std::sqrt(std::max(0.0, x_norm * x_norm - g * g)) / x_norm;
  };
  double previous_fit = estimated_fit(model.core);

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    a = leading_left_singular_vectors(
        unfold(n_mode_product(n_mode_product(x, b.transpose(), 2), c.transpose(), 3), 1), p);
    b = leading_left_singular_vectors(
        unfold(n_mode_product(n_mode_product(x, a.transpose(), 1), c.transpose(), 3), 2), q);
    const DenseTensor3 partial = n_mode_product(n_mode_product(x, a.transpose(), 1), b.transpose(), 2);
    c = leading_left_singular_vectors(unfold(partial, 3), r);

    DenseTensor3 core = n_mode_product(partial, c.transpose(), 3);
    const double fit = estimated_fit(core);
    model = TuckerModel{std::move(core), a, b, c, std::nullopt, it, false};
    if (std::abs(fit - previous_fit) < cfg.rel_tolerance) {
      model.converged = true;
      break;
    }
    previous_fit = fit;
  }

  model.fit = 1.0 - frobenius_norm(subtract(x, reconstruct_tucker(model.core, model.a, model.b,
                                                                   model.c))) / x_norm;
  return model;
}

TuckerModel orthonormalize_tucker(const DenseTensor3& core, const Matrix& a, const Matrix& b,
                                  const Matrix& c) {
  const ReducedQr qa = reduced_qr(a, 1);
  const ReducedQr qb = reduced_qr(b, 2);
  const ReducedQr qc = reduced_qr(c, 3);
  DenseTensor3 g = reconstruct_tucker(core, qa.r, qb.r, qc.r);
  return TuckerModel{std::move(g), qa.q, qb.q, qc.q, std::nullopt, 0, true};
}

}  // namespace corcon
