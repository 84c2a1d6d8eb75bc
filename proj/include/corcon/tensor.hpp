#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "corcon/errors.hpp"

namespace corcon {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Sizes (I, J, K) of a 3-mode tensor.
using Dims = std::array<std::size_t, 3>;

std::string to_string(const Dims& dims);

/// Throws ValidationError if any entry of `m` is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

/// Dense 3-mode tensor of doubles.
///
/// Storage is mode-1 fastest: element (i, j, k) lives at i + I*j + I*J*k.
/// Instances are immutable once constructed; all operations return new
/// tensors.
class DenseTensor3 {
 public:
  /// Zero tensor. Every dimension must be >= 1.
  explicit DenseTensor3(const Dims& dims);
  /// Takes ownership of `values`; rejects wrong length or non-finite data.
  DenseTensor3(const Dims& dims, std::vector<double> values);

  const Dims& dims() const noexcept { return dims_; }
  /// Size along `mode` (1, 2 or 3).
  std::size_t dim(int mode) const;
  std::size_t size() const noexcept { return values_.size(); }

  double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return values_[i + dims_[0] * (j + dims_[1] * k)];
  }
  /// Bounds-checked element access.
  double at(std::size_t i, std::size_t j, std::size_t k) const;

  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const DenseTensor3&, const DenseTensor3&) = default;

 private:
  Dims dims_;
  std::vector<double> values_;
};

/// Throws ValidationError unless mode is 1, 2 or 3.
void check_mode(int mode);

/// The mode-`mode` fiber through the two fixed indices. `fixed` lists the
/// indices of the remaining modes in increasing mode order.
std::vector<double> mode_n_fiber(const DenseTensor3& x, int mode,
                                 std::pair<std::size_t, std::size_t> fixed);

/// Mode-n matricization: an I_n x (product of other dims) matrix whose
/// columns are the mode-n fibers. Columns cycle the remaining modes in
/// increasing order with the lower mode fastest, e.g. mode 1 column index
/// is j + J*k and mode 2 column index is i + I*k.
Matrix unfold(const DenseTensor3& x, int mode);

/// Inverse of unfold for a tensor of the given dims.
DenseTensor3 fold(const Matrix& m, int mode, const Dims& dims);

/// X x_n Z: every mode-n fiber of X multiplied by Z (Z.cols == I_n).
DenseTensor3 n_mode_product(const DenseTensor3& x, const Matrix& z, int mode);

double frobenius_norm(const DenseTensor3& x);

/// R x R x R tensor with ones on the superdiagonal.
DenseTensor3 superdiagonal_identity(std::size_t rank);

/// G x_1 A x_2 B x_3 C.
DenseTensor3 reconstruct_tucker(const DenseTensor3& core, const Matrix& a,
                                const Matrix& b, const Matrix& c);

/// Sum of the R rank-one terms a_r o b_r o c_r, evaluated as
/// superdiagonal_identity(R) x_1 A x_2 B x_3 C.
DenseTensor3 reconstruct_cp(const Matrix& a, const Matrix& b, const Matrix& c);

/// Elementwise X - Y.
DenseTensor3 subtract(const DenseTensor3& x, const DenseTensor3& y);

}  // namespace corcon
