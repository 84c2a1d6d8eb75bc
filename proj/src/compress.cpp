#include "corcon/compress.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "corcon/rng.hpp"

namespace corcon {

namespace {

void check_target(const Dims& dims, const Dims& target) {
  for (int m = 0; m < 3; ++m) {
    if (target[m] < 1 || target[m] > dims[m]) {
      throw ShapeError("compression target " + to_string(target) + " must lie within source " +
                       to_string(dims));
    }
  }
}

// Draws the Gaussian matrices of every randomized mode, U first.
std::array<Matrix, 3> draw_gaussians(const Dims& dims, const Dims& target, std::uint64_t seed,
                                     const ModeSet& randomized) {
  check_target(dims, target);
  Rng rng(seed);
  std::array<Matrix, 3> out;
  for (int m = 0; m < 3; ++m) {
    const auto rows = static_cast<Eigen::Index>(target[m]);
    const auto cols = static_cast<Eigen::Index>(dims[m]);
    if (randomized[m]) {
      out[m] = gaussian_matrix(rng, rows, cols);
    } else {
      if (rows != cols) {
        throw ShapeError("mode " + std::to_string(m + 1) +
                         " is not compressed but its target size differs from the source");
      }
      out[m] = Matrix::Identity(rows, cols);
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::gaussian:
      return "gaussian";
    case Scheme::orthonormal:
      return "orthonormal";
    case Scheme::tucker:
      return "tucker";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "gaussian") return Scheme::gaussian;
  if (lower == "orthonormal") return Scheme::orthonormal;
  if (lower == "tucker") return Scheme::tucker;
  throw ValidationError("unknown compression scheme '" + std::string(name) + "'");
}

ModeSet parse_modes(std::string_view text) {
  ModeSet modes{false, false, false};
  bool any = false;
  for (char ch : text) {
    if (ch == ',' || ch == ' ') continue;
    if (ch < '1' || ch > '3') {
      throw ValidationError("mode list '" + std::string(text) + "' may only contain 1, 2, 3");
    }
    modes[ch - '1'] = true;
    any = true;
  }
  if (!any) throw ValidationError("mode list must not be empty");
  return modes;
}

std::string to_string(const ModeSet& modes) {
  std::string out;
  for (int m = 0; m < 3; ++m) {
    if (!modes[m]) continue;
    if (!out.empty()) out += ',';
    out += static_cast<char>('1' + m);
  }
  return out;
}

Dims ratio_to_dims(const Dims& dims, const RatioSpec& spec) {
  if (!(spec.ratio > 0.0 && spec.ratio <= 1.0)) {
    throw ValidationError("compression ratio must lie in (0, 1], got " +
                          std::to_string(spec.ratio));
  }
  Dims out = dims;
  for (int m = 0; m < 3; ++m) {
    if (!spec.compressed_modes[m]) continue;
    // 0.29 * 100 evaluates to 28.999999999999996.
    const double scaled = std::floor(spec.ratio * static_cast<double>(dims[m]) + 1e-9);
    out[m] = std::max<std::size_t>(1, static_cast<std::size_t>(scaled));
  }
  return out;
}

Dims CompressionOperator::source_dims() const {
  return {static_cast<std::size_t>(u.cols()), static_cast<std::size_t>(v.cols()),
          static_cast<std::size_t>(w.cols())};
}

Dims CompressionOperator::target_dims() const {
  return {static_cast<std::size_t>(u.rows()), static_cast<std::size_t>(v.rows()),
          static_cast<std::size_t>(w.rows())};
}

const Matrix& CompressionOperator::factor(int mode) const {
  check_mode(mode);
  return mode == 1 ? u : (mode == 2 ? v : w);
}

CompressionOperator gaussian_operator(const Dims& dims, const Dims& target, std::uint64_t seed,
                                      const ModeSet& randomized) {
  auto g = draw_gaussians(dims, target, seed, randomized);
  return CompressionOperator{std::move(g[0]), std::move(g[1]), std::move(g[2]), Scheme::gaussian,
                             seed};
}

CompressionOperator orthonormal_operator(const Dims& dims, const Dims& target, std::uint64_t seed,
                                         const ModeSet& randomized) {
  auto g = draw_gaussians(dims, target, seed, randomized);
  for (int m = 0; m < 3; ++m) {
    if (randomized[m]) g[m] = reduced_qr(g[m].transpose(), m + 1).q.transpose();
  }
  return CompressionOperator{std::move(g[0]), std::move(g[1]), std::move(g[2]),
                             Scheme::orthonormal, seed};
}

CompressionOperator tucker_operator(const DenseTensor3& x, const Dims& target,
                                    const FitConfig& cfg) {
  check_target(x.dims(), target);
  const TuckerModel model = tucker3(x, target, cfg);
  return CompressionOperator{model.a.transpose(), model.b.transpose(), model.c.transpose(),
                             Scheme::tucker, std::nullopt};
}

DenseTensor3 compress(const DenseTensor3& x, const CompressionOperator& op) {
  if (op.source_dims() != x.dims()) {
    throw ShapeError("operator for " + to_string(op.source_dims()) +
                     " tensors cannot compress a " + to_string(x.dims()) + " tensor");
  }
  return n_mode_product(n_mode_product(n_mode_product(x, op.u, 1), op.v, 2), op.w, 3);
}

DenseTensor3 project_onto_rowspaces(const DenseTensor3& x, const CompressionOperator& op) {
  if (op.scheme == Scheme::gaussian) {
    throw ValidationError("rowspace projection requires orthonormal rows; Gaussian operators "
                          "do not have them");
  }
  if (op.source_dims() != x.dims()) {
    throw ShapeError("operator for " + to_string(op.source_dims()) + " tensors cannot project a " +
                     to_string(x.dims()) + " tensor");
  }
  return n_mode_product(n_mode_product(n_mode_product(x, op.u.transpose() * op.u, 1),
                                       op.v.transpose() * op.v, 2),
                        op.w.transpose() * op.w, 3);
}

double row_orthonormality_error(const Matrix& m) {
  return (m * m.transpose() - Matrix::Identity(m.rows(), m.rows())).cwiseAbs().maxCoeff();
}

}  // namespace corcon
