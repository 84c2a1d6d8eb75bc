#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "corcon/corcondia.hpp"
#include "corcon/synth.hpp"
#include "oracles.hpp"

using namespace corcon;

TEST(CorcondiaCore, ExactModelGivesSuperdiagonalIdentity) {
  std::mt19937_64 rng(1);
  for (std::size_t r = 1; r <= 4; ++r) {
    const auto rr = static_cast<Eigen::Index>(r);
    const Matrix a = oracle::random_matrix(rng, 6, rr);
    const Matrix b = oracle::random_matrix(rng, 5, rr);
    const Matrix c = oracle::random_matrix(rng, 7, rr);
    const DenseTensor3 core = corcondia_core(reconstruct_cp(a, b, c), a, b, c);
    EXPECT_LE(oracle::max_abs_diff(core, superdiagonal_identity(r)), 1e-8);
  }
}

TEST(CorcondiaCore, ScaleLandsInTheCore) {
  std::mt19937_64 rng(2);
  Matrix a = oracle::random_matrix(rng, 3, 1).normalized();
  Matrix b = oracle::random_matrix(rng, 4, 1).normalized();
  Matrix c = oracle::random_matrix(rng, 2, 1).normalized();
  const DenseTensor3 x = reconstruct_cp(2.0 * a, b, c);
  const DenseTensor3 core = corcondia_core(x, a, b, c);
  ASSERT_EQ(core.dims(), (Dims{1, 1, 1}));
  EXPECT_NEAR(core(0, 0, 0), 2.0, 1e-12);
}

TEST(CorcondiaCore, MatchesNormalEquationsOracle) {
  std::mt19937_64 rng(3);
  const DenseTensor3 x = oracle::random_tensor(rng, {4, 5, 6});
  const Matrix a = oracle::random_matrix(rng, 4, 2);
  const Matrix b = oracle::random_matrix(rng, 5, 2);
  const Matrix c = oracle::random_matrix(rng, 6, 2);
  EXPECT_LE(oracle::max_abs_diff(corcondia_core(x, a, b, c),
                                 oracle::normal_equations_core(x, a, b, c)),
            1e-8);
}

TEST(CorcondiaCore, ShapeMismatch) {
  std::mt19937_64 rng(4);
  const DenseTensor3 x = oracle::random_tensor(rng, {4, 5, 6});
  EXPECT_THROW(corcondia_core(x, oracle::random_matrix(rng, 5, 2), oracle::random_matrix(rng, 5, 2),
                              oracle::random_matrix(rng, 6, 2)),
               ShapeError);
  EXPECT_THROW(corcondia_core(x, oracle::random_matrix(rng, 4, 2), oracle::random_matrix(rng, 5, 3),
                              oracle::random_matrix(rng, 6, 2)),
               ShapeError);
}

TEST(CoreConsistency, FormulaEvaluation) {
  EXPECT_DOUBLE_EQ(core_consistency(superdiagonal_identity(3)), 100.0);
  // ||I - G||^2 = 2 ||I||^2 for R = 1.
  EXPECT_NEAR(core_consistency(DenseTensor3({1, 1, 1}, {1.0 - std::sqrt(2.0)})), -100.0, 1e-12);
  // Zero core: ||I - 0||^2 = ||I||^2.
  EXPECT_DOUBLE_EQ(core_consistency(DenseTensor3(Dims{2, 2, 2})), 0.0);
  EXPECT_THROW(core_consistency(DenseTensor3(Dims{2, 2, 3})), ShapeError);
}

TEST(CoreConsistency, NeverExceedsHundred) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const DenseTensor3 g = oracle::random_tensor(rng, {3, 3, 3});
    EXPECT_LE(core_consistency(g), 100.0);
    EXPECT_NEAR(core_consistency(g), oracle::corcondia_from_core(g), 1e-10);
  }
}

TEST(Corcondia, ExactRankModelIsHundred) {
  std::mt19937_64 rng(6);
  const Matrix a = oracle::random_matrix(rng, 8, 3);
  const Matrix b = oracle::random_matrix(rng, 6, 3);
  const Matrix c = oracle::random_matrix(rng, 5, 3);
  const DenseTensor3 x = reconstruct_cp(a, b, c);
  const CorcondiaReport report = corcondia(x, cp_als(x, 3));
  EXPECT_NEAR(report.value, 100.0, 1e-6);
  EXPECT_EQ(report.rank, 3u);
  EXPECT_FALSE(report.rank_deficient);
  EXPECT_NEAR(report.value, oracle::corcondia_from_core(report.core), 1e-10);
}

TEST(Corcondia, PermutationOfComponentsIsInvariant) {
  std::mt19937_64 rng(7);
  const DenseTensor3 x = oracle::random_tensor(rng, {5, 4, 6});
  const Matrix a = oracle::random_matrix(rng, 5, 3);
  const Matrix b = oracle::random_matrix(rng, 4, 3);
  const Matrix c = oracle::random_matrix(rng, 6, 3);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(3);
  perm.indices() << 2, 0, 1;
  const double v0 = corcondia(x, a, b, c).value;
  const double v1 = corcondia(x, a * perm, b * perm, c * perm).value;
  EXPECT_NEAR(v0, v1, 1e-10);
}

TEST(Corcondia, CommonRescalingIsInvariant) {
  std::mt19937_64 rng(8);
  const DenseTensor3 x = oracle::random_tensor(rng, {5, 4, 6});
  const Matrix a = oracle::random_matrix(rng, 5, 2);
  const Matrix b = oracle::random_matrix(rng, 4, 2);
  const Matrix c = oracle::random_matrix(rng, 6, 2);
  const double v0 = corcondia(x, a, b, c).value;
  for (double alpha : {3.5, -0.2, 1e3}) {
    EXPECT_NEAR(corcondia(x, alpha * a, b, c / alpha).value, v0, 1e-8);
  }
}

TEST(Corcondia, PerColumnRescalingOfExactModelIsInvariant) {
  std::mt19937_64 rng(18);
  const Matrix a = oracle::random_matrix(rng, 5, 3);
  const Matrix b = oracle::random_matrix(rng, 4, 3);
  const Matrix c = oracle::random_matrix(rng, 6, 3);
  const DenseTensor3 x = reconstruct_cp(a, b, c);
  Matrix a2 = a, c2 = c;
  const double scales[] = {3.5, -0.2, 40.0};
  for (int r = 0; r < 3; ++r) {
    a2.col(r) *= scales[r];
    c2.col(r) /= scales[r];
  }
  EXPECT_NEAR(corcondia(x, a2, b, c2).value, corcondia(x, a, b, c).value, 1e-8);
}

TEST(Corcondia, RankDeficientFactorsStillReport) {
  std::mt19937_64 rng(9);
  const DenseTensor3 x = oracle::random_tensor(rng, {5, 4, 6});
  Matrix a = oracle::random_matrix(rng, 5, 2);
  a.col(1) = a.col(0);
  const CorcondiaReport report =
      corcondia(x, a, oracle::random_matrix(rng, 4, 2), oracle::random_matrix(rng, 6, 2));
  EXPECT_TRUE(report.rank_deficient);
  EXPECT_TRUE(std::isfinite(report.value));
  EXPECT_LE(report.value, 100.0);
}

TEST(CorcondiaSweep, RankOneTensor) {
  std::mt19937_64 rng(10);
  const DenseTensor3 x = reconstruct_cp(oracle::random_matrix(rng, 5, 1),
                                        oracle::random_matrix(rng, 4, 1),
                                        oracle::random_matrix(rng, 3, 1));
  const auto reports = corcondia_sweep(x, {1});
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_NEAR(reports[0].value, 100.0, 1e-6);
}

TEST(CorcondiaSweep, OrderFollowsInputAndBadRankAborts) {
  std::mt19937_64 rng(11);
  const DenseTensor3 x = reconstruct_cp(oracle::random_matrix(rng, 8, 2),
                                        oracle::random_matrix(rng, 7, 2),
                                        oracle::random_matrix(rng, 6, 2));
  const auto reports = corcondia_sweep(x, {2, 1});
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_EQ(reports[0].rank, 2u);
  EXPECT_EQ(reports[1].rank, 1u);
  EXPECT_THROW(corcondia_sweep(x, {}), ValidationError);
  EXPECT_THROW(corcondia_sweep(x, {1, 1000}), ValidationError);
}

TEST(CorcondiaSweep, NoisySyntheticCollapsesAboveTrueRank) {
  std::vector<double> mean(5, 0.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SynthSpec spec;
    spec.noise_level = 0.05;
    spec.seed = seed;
    FitConfig cfg;
    cfg.seed = seed;
    const auto reports = corcondia_sweep(synth_tensor(spec), {1, 2, 3, 4, 5}, cfg);
    for (std::size_t n = 0; n < 5; ++n) mean[n] += reports[n].value / 5.0;
  }
  for (std::size_t n = 0; n < 3; ++n) EXPECT_GT(mean[n], 90.0) << "R=" << n + 1;
  EXPECT_LT(mean[4], 30.0);
}
