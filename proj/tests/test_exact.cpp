#include <gtest/gtest.h>

#include <cmath>

#include "psdsketch/errors.hpp"
#include "psdsketch/exact.hpp"
#include "psdsketch/generators.hpp"
#include "psdsketch/linalg.hpp"
#include "psdsketch/lowrank.hpp"

using namespace psdsketch;

namespace {

PsdMatrix powerlaw(Index n, std::uint64_t seed) {
  return gen_spectrum_psd(n, powerlaw_spectrum(n), Seed{seed});
}

// tau_i = a_i^T (A A^T + ridge I)^+ a_i by a direct solve, independent of the
// eigendecomposition route in the library.
Vector direct_ridge_scores(const Matrix& a, Index k) {
  const Eigen::JacobiSVD<Matrix> svd(a);
  const Vector s = svd.singularValues();
  double tail = 0.0;
  for (Index i = k; i < s.size(); ++i) tail += s[i] * s[i];
  const Matrix g = a * a.transpose() + (tail / static_cast<double>(k)) * Matrix::Identity(a.rows(), a.rows());
  const Matrix sol = g.completeOrthogonalDecomposition().solve(a);
  return (a.cwiseProduct(sol)).colwise().sum().transpose();
}

}  // namespace

TEST(EigPsd, ReconstructsAndSortsDescending) {
  const PsdMatrix a = powerlaw(40, 1);
  const SpectralData spec = eig_psd(a);
  for (Index i = 1; i < spec.n(); ++i) EXPECT_GE(spec.eigenvalues[i - 1], spec.eigenvalues[i]);
  const Matrix back = spec.eigenvectors * spec.eigenvalues.asDiagonal() * spec.eigenvectors.transpose();
  EXPECT_LT((back - a.dense()).norm(), 1e-10 * a.dense().norm());
}

TEST(EigPsd, PlantedSpectrumRecovered) {
  const Vector ev = powerlaw_spectrum(30);
  const SpectralData spec = eig_psd(gen_spectrum_psd(30, ev, Seed{4}));
  EXPECT_LT((spec.eigenvalues - ev).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BestRankK, TailsMatchEigenvalues) {
  const Vector ev = powerlaw_spectrum(25);
  const PsdMatrix a = gen_spectrum_psd(25, ev, Seed{8});
  const BestRankK best = best_rank_k(a, 5);
  double frob = 0.0;
  for (Index i = 5; i < 25; ++i) frob += ev[i] * ev[i];
  EXPECT_NEAR(best.frob_tail_sq, frob, 1e-12);
  EXPECT_NEAR(best.spec_tail_sq, ev[5] * ev[5], 1e-12);
  EXPECT_NEAR((a.dense() - best.factor.dense()).squaredNorm(), frob, 1e-10);
  EXPECT_THROW(best_rank_k(a, 25), ValidationError);
}

TEST(MatrixSqrt, SquaresBack) {
  const PsdMatrix a = powerlaw(20, 2);
  const PsdMatrix r = matrix_sqrt(a);
  EXPECT_LT((r.dense() * r.dense() - a.dense()).norm(), 1e-10);
}

TEST(MatrixSqrt, RejectsIndefinite) {
  Matrix m = Matrix::Identity(3, 3);
  m(2, 2) = -1.0;
  EXPECT_THROW(matrix_sqrt(eig_psd(m)), NotPsdError);
}

TEST(RidgeScores, GeneralMatchesDirectSolve) {
  Rng rng(Seed{5}, "general");
  const Matrix a = gaussian_matrix(rng, 12, 20);
  const RidgeScores rs = exact_ridge_scores(a, 3);
  const Vector direct = direct_ridge_scores(a, 3);
  EXPECT_LT((rs.scores - direct).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(RidgeScores, PsdRouteMatchesGeneral) {
  const PsdMatrix a = powerlaw(30, 6);
  const SpectralData spec = eig_psd(a);
  for (Index k : {1, 4, 9}) {
    const RidgeScores via_spec = exact_ridge_scores_psd(spec, k, 1.0);
    const RidgeScores general = exact_ridge_scores(a.dense(), k);
    EXPECT_LT((via_spec.scores - general.scores).cwiseAbs().maxCoeff(), 1e-9) << "k=" << k;
    const RidgeScores root = exact_ridge_scores_psd(spec, k, 0.5);
    const RidgeScores root_general = exact_ridge_scores(matrix_sqrt(spec), k);
    EXPECT_LT((root.scores - root_general.scores).cwiseAbs().maxCoeff(), 1e-9) << "k=" << k;
  }
}

TEST(RidgeScores, SumAtMostTwoK) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PsdMatrix a = powerlaw(35, 100 + seed);
    const SpectralData spec = eig_psd(a);
    for (Index k : {1, 3, 7}) {
      EXPECT_LE(exact_ridge_scores_psd(spec, k, 1.0).sum, 2.0 * static_cast<double>(k) + 1e-9);
      EXPECT_LE(exact_ridge_scores_psd(spec, k, 0.5).sum, 2.0 * static_cast<double>(k) + 1e-9);
    }
  }
}

TEST(RidgeScores, RankKMatrixHasUnitScoresOnSupport) {
  // A = diag(1, 1, 0, ...): tail is zero so tau_i = 1 on the support.
  Matrix d = Matrix::Zero(6, 6);
  d(0, 0) = 1.0;
  d(1, 1) = 1.0;
  const RidgeScores rs = exact_ridge_scores_psd(eig_psd(d), 2, 1.0);
  EXPECT_NEAR(rs.scores[0], 1.0, 1e-12);
  EXPECT_NEAR(rs.scores[1], 1.0, 1e-12);
  EXPECT_NEAR(rs.scores[4], 0.0, 1e-12);
}

TEST(StatisticalDimension, ClosedFormAndSingularity) {
  Vector ev(4);
  ev << 3.0, 1.0, 1.0, 0.0;
  EXPECT_NEAR(exact_statistical_dimension(ev, 1.0), 0.9 + 0.5 + 0.5, 1e-15);
  EXPECT_THROW(exact_statistical_dimension(ev, 0.0), SingularityError);
  Vector full(2);
  full << 2.0, 1.0;
  EXPECT_NEAR(exact_statistical_dimension(full, 0.0), 2.0, 1e-15);
}

TEST(RidgeRegression, MatchesNormalEquations) {
  const PsdMatrix a = powerlaw(25, 12);
  Rng rng(Seed{1}, "y");
  const Vector y = gaussian_matrix(rng, 25, 1).col(0);
  const double lambda = 0.05;
  const RidgeSolution sol = exact_ridge_regression(a, y, lambda);
  const Matrix& m = a.dense();
  const Vector direct =
      (m.transpose() * m + lambda * Matrix::Identity(25, 25)).ldlt().solve(m.transpose() * y);
  EXPECT_LT((sol.x - direct).norm(), 1e-10 * direct.norm());
  EXPECT_NEAR(sol.objective, ridge_objective(m, direct, y, lambda), 1e-10);
}

TEST(HardInstance, PlantedOptimumMatchesEigendecomposition) {
  for (HardVariant v : {HardVariant::gamma_b, HardVariant::mu, HardVariant::nu}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const HardInstanceSpec spec{64, 2, 0.5, v, Seed{seed}};
      const HardInstance inst = gen_hard_instance(spec);
      const double closed = planted_frob_tail_sq(inst, 2);
      EXPECT_NEAR(closed, eig_psd(inst.a).frob_tail_sq(2), 1e-8) << to_string(v) << " seed " << seed;
    }
  }
}

TEST(HardInstance, BlockStructure) {
  const HardInstanceSpec spec{128, 4, 0.5, HardVariant::gamma_b, Seed{3}};
  const HardInstance inst = gen_hard_instance(spec);
  ASSERT_EQ(inst.blocks.size(), 4u);
  for (const auto& b : inst.blocks) EXPECT_EQ(b.size(), 16u);
  EXPECT_EQ(inst.planted_size, planted_subset_size(16, 0.5));
  for (const auto& s : inst.planted) {
    for (Index i : s) {
      for (Index j : s) EXPECT_EQ(inst.a(i, j), 1.0);
    }
  }
  EXPECT_EQ(inst.a.trace(), 128.0);
}

TEST(HardInstance, ValidatesParameters) {
  EXPECT_THROW(gen_hard_instance({100, 3, 0.5, HardVariant::gamma_b, Seed{}}), ValidationError);
  EXPECT_THROW(gen_hard_instance({8, 1, 1.0, HardVariant::mu, Seed{}}), ValidationError);
  EXPECT_THROW(parse_hard_variant("delta"), ValidationError);
}

TEST(Counterexample, ConstructedDistanceEqualsClosedForm) {
  const Counterexample c = gen_sqrt_route_counterexample(32, 1, 0.5, 10.0, 1.0);
  const Matrix root = matrix_sqrt(eig_psd(c.a));
  const double expected = (1.0 + 0.5) * 30.0 * 1.0;
  EXPECT_NEAR((root - c.b).squaredNorm(), expected, 1e-9);
}
