#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "corcon/decomp.hpp"
#include "corcon/tensor.hpp"

namespace corcon {

enum class Scheme { gaussian, orthonormal, tucker };

std::string_view to_string(Scheme scheme);
/// Accepts "gaussian", "orthonormal", "tucker" (case-insensitive).
Scheme parse_scheme(std::string_view name);

/// Subset of modes {1, 2, 3}; index 0 is mode 1.
using ModeSet = std::array<bool, 3>;
inline constexpr ModeSet kAllModes{true, true, true};

/// Parses lists such as "1,2" or "3".
ModeSet parse_modes(std::string_view text);
std::string to_string(const ModeSet& modes);

/// Compression ratio: the fraction of each listed mode that is kept.
struct RatioSpec {
  double ratio = 1.0;
  ModeSet compressed_modes{true, true, false};
};

/// Listed modes shrink to floor(ratio * dim), at least 1; the rest keep
/// their size. Throws ValidationError for ratio outside (0, 1].
Dims ratio_to_dims(const Dims& dims, const RatioSpec& spec);

/// Modewise compression matrices U (L x I), V (M x J), W (N x K).
struct CompressionOperator {
  Matrix u;
  Matrix v;
  Matrix w;
  Scheme scheme = Scheme::gaussian;
  /// Absent for the Tucker scheme.
  std::optional<std::uint64_t> seed;

  Dims source_dims() const;
  Dims target_dims() const;
  const Matrix& factor(int mode) const;
};

/// I.i.d. standard normal U, V, W drawn from one stream seeded by `seed`, in
/// the order U, V, W, each row by row. Modes outside `randomized` get an
/// identity matrix and must keep their size.
CompressionOperator gaussian_operator(const Dims& dims, const Dims& target, std::uint64_t seed,
                                      const ModeSet& randomized = kAllModes);

/// Per mode: the Gaussian draw G (L x I) of gaussian_operator with the same
/// arguments, then U = Q^T from the reduced QR of G^T. Rows are orthonormal.
CompressionOperator orthonormal_operator(const Dims& dims, const Dims& target, std::uint64_t seed,
                                         const ModeSet& randomized = kAllModes);

/// Transposed factors of tucker3(X, target): compressing X with this
/// operator yields the fitted TUCKER3 core.
CompressionOperator tucker_operator(const DenseTensor3& x, const Dims& target,
                                    const FitConfig& cfg = {});

/// X x_1 U x_2 V x_3 W.
DenseTensor3 compress(const DenseTensor3& x, const CompressionOperator& op);

/// X x_1 U^T U x_2 V^T V x_3 W^T W; only defined for orthonormal-row
/// operators, so Gaussian operators are rejected.
DenseTensor3 project_onto_rowspaces(const DenseTensor3& x, const CompressionOperator& op);

/// max |M M^T - I|.
double row_orthonormality_error(const Matrix& m);

}  // namespace corcon
