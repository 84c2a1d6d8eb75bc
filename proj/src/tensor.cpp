#include "corcon/tensor.hpp"

#include <cmath>
#include <sstream>

namespace corcon {

namespace {

std::string shape_of(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

void check_dims(const Dims& dims) {
  for (std::size_t d : dims) {
    if (d == 0) {
      throw ValidationError("tensor dimensions must be positive, got " + to_string(dims));
    }
  }
}

}  // namespace

std::string to_string(const Dims& dims) {
  std::ostringstream os;
  os << dims[0] << "x" << dims[1] << "x" << dims[2];
  return os.str();
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + " contains non-finite entries");
  }
}

void check_mode(int mode) {
  if (mode < 1 || mode > 3) {
    throw ValidationError("mode must be 1, 2 or 3, got " + std::to_string(mode));
  }
}

DenseTensor3::DenseTensor3(const Dims& dims) : dims_(dims) {
  check_dims(dims_);
  values_.assign(dims_[0] * dims_[1] * dims_[2], 0.0);
}

DenseTensor3::DenseTensor3(const Dims& dims, std::vector<double> values)
    : dims_(dims), values_(std::move(values)) {
  check_dims(dims_);
  const std::size_t expected = dims_[0] * dims_[1] * dims_[2];
  if (values_.size() != expected) {
    throw ShapeError("tensor " + to_string(dims_) + " needs " + std::to_string(expected) +
                     " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t n = 0; n < values_.size(); ++n) {
    if (!std::isfinite(values_[n])) {
      throw ValidationError("non-finite tensor entry at linear index " + std::to_string(n));
    }
  }
}

std::size_t DenseTensor3::dim(int mode) const {
  check_mode(mode);
  return dims_[mode - 1];
}

double DenseTensor3::at(std::size_t i, std::size_t j, std::size_t k) const {
  const std::array<std::size_t, 3> idx{i, j, k};
  for (int m = 0; m < 3; ++m) {
    if (idx[m] >= dims_[m]) {
      throw BoundsError("index " + std::to_string(idx[m]) + " out of range for mode " +
                        std::to_string(m + 1) + " of size " + std::to_string(dims_[m]));
    }
  }
  return (*this)(i, j, k);
}

std::vector<double> mode_n_fiber(const DenseTensor3& x, int mode,
                                 std::pair<std::size_t, std::size_t> fixed) {
  check_mode(mode);
  const Dims& d = x.dims();
  // The two non-varying modes, in increasing order.
  const int other1 = mode == 1 ? 2 : 1;
  const int other2 = mode == 3 ? 2 : 3;
  if (fixed.first >= d[other1 - 1]) {
    throw BoundsError("fixed index " + std::to_string(fixed.first) + " out of range for mode " +
                      std::to_string(other1) + " of size " + std::to_string(d[other1 - 1]));
  }
  if (fixed.second >= d[other2 - 1]) {
    throw BoundsError("fixed index " + std::to_string(fixed.second) + " out of range for mode " +
                      std::to_string(other2) + " of size " + std::to_string(d[other2 - 1]));
  }

  std::vector<double> fiber(d[mode - 1]);
  for (std::size_t n = 0; n < fiber.size(); ++n) {
    std::array<std::size_t, 3> idx{};
    idx[mode - 1] = n;
    idx[other1 - 1] = fixed.first;
    idx[other2 - 1] = fixed.second;
    fiber[n] = x(idx[0], idx[1], idx[2]);
  }
  return fiber;
}

Matrix unfold(const DenseTensor3& x, int mode) {
  check_mode(mode);
  const auto [ni, nj, nk] = x.dims();
  switch (mode) {
    case 1:
      // Storage already is the column-major mode-1 unfolding.
      return Eigen::Map<const Matrix>(x.values().data(), ni, nj * nk);
    case 2: {
      Matrix m(nj, ni * nk);
      for (std::size_t k = 0; k < nk; ++k)
        for (std::size_t j = 0; j < nj; ++j)
          for (std::size_t i = 0; i < ni; ++i) m(j, i + ni * k) = x(i, j, k);
      return m;
    }
    default:
      return Eigen::Map<const Matrix>(x.values().data(), ni * nj, nk).transpose();
  }
}

DenseTensor3 fold(const Matrix& m, int mode, const Dims& dims) {
  check_mode(mode);
  const auto [ni, nj, nk] = dims;
  const auto rows = static_cast<std::size_t>(m.rows());
  const auto cols = static_cast<std::size_t>(m.cols());
  const std::size_t want_rows = dims[mode - 1];
  if (rows != want_rows || rows * cols != ni * nj * nk) {
    throw ShapeError("cannot fold " + shape_of(m) + " matrix along mode " + std::to_string(mode) +
                     " into " + to_string(dims));
  }
  std::vector<double> values(ni * nj * nk);
  switch (mode) {
    case 1:
      Eigen::Map<Matrix>(values.data(), ni, nj * nk) = m;
      break;
    case 2:
      for (std::size_t k = 0; k < nk; ++k)
        for (std::size_t j = 0; j < nj; ++j)
          for (std::size_t i = 0; i < ni; ++i) values[i + ni * (j + nj * k)] = m(j, i + ni * k);
      break;
    default:
      Eigen::Map<Matrix>(values.data(), ni * nj, nk) = m.transpose();
      break;
  }
  return DenseTensor3(dims, std::move(values));
}

DenseTensor3 n_mode_product(const DenseTensor3& x, const Matrix& z, int mode) {
  check_mode(mode);
  const auto [ni, nj, nk] = x.dims();
  if (static_cast<std::size_t>(z.cols()) != x.dim(mode)) {
    throw ShapeError("n-mode product along mode " + std::to_string(mode) + ": matrix " +
                     shape_of(z) + " does not conform to tensor " + to_string(x.dims()));
  }
  if (z.rows() == 0) {
    throw ShapeError("n-mode product with empty matrix " + shape_of(z));
  }
  const auto out_n = static_cast<std::size_t>(z.rows());
  const double* src = x.values().data();

  Dims out_dims = x.dims();
  out_dims[mode - 1] = out_n;
  std::vector<double> out(out_dims[0] * out_dims[1] * out_dims[2]);

  switch (mode) {
    case 1:
      Eigen::Map<Matrix>(out.data(), out_n, nj * nk).noalias() =
          z * Eigen::Map<const Matrix>(src, ni, nj * nk);
      break;
    case 2:
      // Each frontal slice X(:, :, k) is an I x J column-major block.
      for (std::size_t k = 0; k < nk; ++k) {
        Eigen::Map<Matrix>(out.data() + ni * out_n * k, ni, out_n).noalias() =
            Eigen::Map<const Matrix>(src + ni * nj * k, ni, nj) * z.transpose();
      }
      break;
    default:
      Eigen::Map<Matrix>(out.data(), ni * nj, out_n).noalias() =
          Eigen::Map<const Matrix>(src, ni * nj, nk) * z.transpose();
      break;
  }
  return DenseTensor3(out_dims, std::move(out));
}

double frobenius_norm(const DenseTensor3& x) {
  double sum = 0.0;
  for (double v : x.values()) sum += v * v;
  return std::sqrt(sum);
}

DenseTensor3 superdiagonal_identity(std::size_t rank) {
  if (rank == 0) throw ValidationError("superdiagonal identity needs rank >= 1");
  std::vector<double> values(rank * rank * rank, 0.0);
  for (std::size_t r = 0; r < rank; ++r) values[r + rank * (r + rank * r)] = 1.0;
  return DenseTensor3({rank, rank, rank}, std::move(values));
}

DenseTensor3 reconstruct_tucker(const DenseTensor3& core, const Matrix& a, const Matrix& b,
                                const Matrix& c) {
  const Dims& g = core.dims();
  if (static_cast<std::size_t>(a.cols()) != g[0] || static_cast<std::size_t>(b.cols()) != g[1] ||
      static_cast<std::size_t>(c.cols()) != g[2]) {
    throw ShapeError("core " + to_string(g) + " does not match factor column counts " +
                     shape_of(a) + ", " + shape_of(b) + ", " + shape_of(c));
  }
  return n_mode_product(n_mode_product(n_mode_product(core, a, 1), b, 2), c, 3);
}

DenseTensor3 reconstruct_cp(const Matrix& a, const Matrix& b, const Matrix& c) {
  if (a.cols() != b.cols() || a.cols() != c.cols() || a.cols() == 0) {
    throw ShapeError("CP factors must share a positive column count, got " + shape_of(a) + ", " +
                     shape_of(b) + ", " + shape_of(c));
  }
  return reconstruct_tucker(superdiagonal_identity(static_cast<std::size_t>(a.cols())), a, b, c);
}

DenseTensor3 subtract(const DenseTensor3& x, const DenseTensor3& y) {
  if (x.dims() != y.dims()) {
    throw ShapeError("cannot subtract " + to_string(y.dims()) + " from " + to_string(x.dims()));
  }
  std::vector<double> out(x.size());
  const auto xv = x.values();
  const auto yv = y.values();
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = xv[n] - yv[n];
  return DenseTensor3(x.dims(), std::move(out));
}

}  // namespace corcon
