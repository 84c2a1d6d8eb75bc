#include "corcon/corcondia.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "corcon/rng.hpp"

namespace corcon {

DenseTensor3 corcondia_core(const DenseTensor3& x, const Matrix& a, const Matrix& b,
                            const Matrix& c) {
  const Dims& d = x.dims();
  if (static_cast<std::size_t>(a.rows()) != d[0] || static_cast<std::size_t>(b.rows()) != d[1] ||
      static_cast<std::size_t>(c.rows()) != d[2]) {
    throw ShapeError("factor row counts " + std::to_string(a.rows()) + ", " +
                     std::to_string(b.rows()) + ", " + std::to_string(c.rows()) +
                     " do not match tensor " + to_string(d));
  }
  if (a.cols() != b.cols() || a.cols() != c.cols() || a.cols() == 0) {
    throw ShapeError("factor matrices must share a positive column count");
  }
  return n_mode_product(
      n_mode_product(n_mode_product(x, pseudoinverse(a), 1), pseudoinverse(b), 2),
      pseudoinverse(c), 3);
}

double core_consistency(const DenseTensor3& core) {
  const Dims& d = core.dims();
  if (d[0] != d[1] || d[0] != d[2]) {
    throw ShapeError("core consistency needs a cubic core, got " + to_string(d));
  }
  const std::size_t rank = d[0];
  double residual = 0.0;
  for (std::size_t k = 0; k < rank; ++k)
    for (std::size_t j = 0; j < rank; ++j)
      for (std::size_t i = 0; i < rank; ++i) {
        const double target = (i == j && j == k) ? 1.0 : 0.0;
        const double diff = target - core(i, j, k);
        residual += diff * diff;
      }
  return (1.0 - residual / static_cast<double>(rank)) * 100.0;
}

CorcondiaReport corcondia(const DenseTensor3& x, const Matrix& a, const Matrix& b,
                          const Matrix& c) {
  DenseTensor3 core = corcondia_core(x, a, b, c);
  const auto rank = static_cast<std::size_t>(a.cols());
  const bool deficient = numerical_rank(a) < a.cols() || numerical_rank(b) < b.cols() ||
                         numerical_rank(c) < c.cols();
  const double value = core_consistency(core);
  return CorcondiaReport{value, std::move(core), rank, deficient};
}

CorcondiaReport corcondia(const DenseTensor3& x, const CpModel& model) {
  return corcondia(x, model.a, model.b, model.c);
}

std::vector<CorcondiaReport> corcondia_sweep(const DenseTensor3& x,
                                             const std::vector<std::size_t>& ranks,
                                             const FitConfig& cfg) {
  if (ranks.empty()) throw ValidationError("corcondia sweep needs at least one rank");
  const Dims& d = x.dims();
  const std::size_t limit = std::min({d[1] * d[2], d[0] * d[2], d[0] * d[1]});
  for (std::size_t rank : ranks) {
    if (rank < 1 || rank > limit) {
      throw ValidationError("rank " + std::to_string(rank) + " is infeasible for a " +
                            to_string(d) + " tensor");
    }
  }
  std::vector<CorcondiaReport> reports;
  reports.reserve(ranks.size());
  for (std::size_t rank : ranks) {
    FitConfig rank_cfg = cfg;
    rank_cfg.seed = derive_seed({cfg.seed, static_cast<std::uint64_t>(rank)});
    try {
      reports.push_back(corcondia(x, cp_als(x, rank, rank_cfg)));
    } catch (const std::exception& e) {
      throw std::runtime_error("corcondia sweep failed at rank " + std::to_string(rank) + ": " +
                               e.what());
    }
  }
  return reports;
}

}  // namespace corcon
