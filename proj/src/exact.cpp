#include "psdsketch/exact.hpp"

#include <algorithm>
#include <cmath>

#include "psdsketch/errors.hpp"
#include "psdsketch/linalg.hpp"

namespace psdsketch {

double SpectralData::frob_tail_sq(Index k) const {
  if (k < 0) throw ValidationError("frob_tail_sq: negative rank");
  if (k >= n()) return 0.0;
  return eigenvalues.tail(n() - k).squaredNorm();
}

double SpectralData::spec_tail_sq(Index k) const {
  if (k < 0) throw ValidationError("spec_tail_sq: negative rank");
  if (k >= n()) return 0.0;
  return eigenvalues[k] * eigenvalues[k];
}

SpectralData eig_psd(const Matrix& sym) {
  if (!sym.allFinite()) throw ValidationError("eig_psd: non-finite entry");
  if (sym.rows() != sym.cols()) throw ValidationError("eig_psd: matrix must be square");
  SymEig es = symmetric_eig(sym);
  SpectralData out;
  out.eigenvalues = std::move(es.values);
  out.eigenvectors = std::move(es.vectors);
  const double top = out.n() > 0 ? std::max(0.0, out.eigenvalues[0]) : 0.0;
  for (Index i = 0; i < out.n(); ++i) {
    if (out.eigenvalues[i] < 0.0 && out.eigenvalues[i] >= -1e-8 * top) out.eigenvalues[i] = 0.0;
  }
  return out;
}

SpectralData eig_psd(const PsdMatrix& a) { return eig_psd(a.dense()); }

Matrix matrix_sqrt(const SpectralData& spec) {
  const Index n = spec.n();
  const double top = n > 0 ? std::max(0.0, spec.eigenvalues[0]) : 0.0;
  Vector roots(n);
  for (Index i = 0; i < n; ++i) {
    const double lam = spec.eigenvalues[i];
    if (lam < -1e-6 * top) throw NotPsdError("matrix_sqrt: matrix is not PSD");
    roots[i] = std::sqrt(std::max(0.0, lam));
  }
  const Matrix half = spec.eigenvectors * roots.cwiseSqrt().asDiagonal();
  Matrix out = Matrix::Zero(n, n);
  out.selfadjointView<Eigen::Upper>().rankUpdate(half);
  out.triangularView<Eigen::StrictlyLower>() = out.transpose();
  return out;
}

PsdMatrix matrix_sqrt(const PsdMatrix& a) { return PsdMatrix(matrix_sqrt(eig_psd(a))); }

BestRankK best_rank_k(const SpectralData& spec, Index k) {
  if (k < 1 || k >= spec.n()) throw ValidationError("best_rank_k: need 1 <= k < n");
  BestRankK out;
  out.factor.right = spec.eigenvectors.leftCols(k);
  out.factor.left = out.factor.right * spec.eigenvalues.head(k).asDiagonal();
  out.frob_tail_sq = spec.frob_tail_sq(k);
  out.spec_tail_sq = spec.spec_tail_sq(k);
  return out;
}

BestRankK best_rank_k(const PsdMatrix& a, Index k) { return best_rank_k(eig_psd(a), k); }

namespace {

// Scores from a factorization M = U diag(s) V^T: the score of column i is
// sum_j V_ij^2 s_j^2 / (s_j^2 + ridge), with pseudoinverse semantics for the
// directions whose regularized eigenvalue falls below the cutoff.
RidgeScores scores_from_singular(const Matrix& v, const Vector& s, Index k) {
  const Index r = s.size();
  RidgeScores out;
  out.k = k;
  const double ridge = r > k ? s.tail(r - k).squaredNorm() / static_cast<double>(k) : 0.0;
  const double top = r > 0 ? s[0] * s[0] + ridge : 0.0;
  Vector weight(r);
  for (Index j = 0; j < r; ++j) {
    const double sq = s[j] * s[j];
    weight[j] = (sq + ridge > kPinvCutoff * top && top > 0.0) ? sq / (sq + ridge) : 0.0;
  }
  out.scores = v.cwiseAbs2() * weight;
  out.sum = out.scores.sum();
  out.ridge = ridge;
  return out;
}

}  // namespace

RidgeScores exact_ridge_scores(const Matrix& a, Index k) {
  if (k < 1 || k > std::min(a.rows(), a.cols())) {
    throw ValidationError("exact_ridge_scores: need 1 <= k <= min(n, d)");
  }
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullV);
  Vector s = Vector::Zero(a.cols());
  s.head(svd.singularValues().size()) = svd.singularValues();
  RidgeScores out = scores_from_singular(svd.matrixV(), s, k);
  out.target = RidgeScores::Target::of_A;
  return out;
}

RidgeScores exact_ridge_scores_psd(const SpectralData& spec, Index k, double power) {
  if (k < 1 || k > spec.n()) throw ValidationError("exact_ridge_scores: need 1 <= k <= n");
  if (power != 1.0 && power != 0.5) throw ValidationError("exact_ridge_scores: power must be 1 or 1/2");
  // Singular values of A^p are lambda_i^p; eigenvalues are already sorted.
  const Vector s = power == 1.0 ? spec.eigenvalues : Vector(spec.eigenvalues.cwiseSqrt());
  RidgeScores out = scores_from_singular(spec.eigenvectors, s, k);
  out.target = power == 1.0 ? RidgeScores::Target::of_A : RidgeScores::Target::of_sqrtA;
  return out;
}

double exact_statistical_dimension(const Vector& eig, double lambda) {
  if (!(lambda >= 0.0)) throw ValidationError("statistical dimension: lambda must be nonnegative");
  const double top = eig.size() > 0 ? eig.cwiseAbs().maxCoeff() : 0.0;
  double s = 0.0;
  for (Index i = 0; i < eig.size(); ++i) {
    const double sq = eig[i] * eig[i];
    if (lambda == 0.0) {
      if (std::abs(eig[i]) <= kPinvCutoff * top || top == 0.0) {
        throw SingularityError("statistical dimension: lambda = 0 with singular A");
      }
      s += 1.0;
    } else {
      s += sq / (sq + lambda);
    }
  }
  return s;
}

double exact_statistical_dimension(const PsdMatrix& a, double lambda) {
  return exact_statistical_dimension(symmetric_eigenvalues(a.dense()), lambda);
}

double ridge_objective(const Matrix& a, const Vector& x, const Vector& y, double lambda) {
  return (a * x - y).squaredNorm() + lambda * x.squaredNorm();
}

RidgeSolution exact_ridge_regression(const SpectralData& spec, const Vector& y, double lambda) {
  if (y.size() != spec.n()) throw ValidationError("ridge regression: y has wrong length");
  if (!(lambda >= 0.0)) throw ValidationError("ridge regression: lambda must be nonnegative");
  const Index n = spec.n();
  const double top = n > 0 ? spec.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  const Vector coeff = spec.eigenvectors.transpose() * y;
  Vector scaled(n);
  for (Index i = 0; i < n; ++i) {
    const double lam = spec.eigenvalues[i];
    const double denom = lam * lam + lambda;
    if (denom <= kPinvCutoff * kPinvCutoff * top * top || denom == 0.0) {
      throw SingularityError("ridge regression: A^2 + lambda I is singular");
    }
    scaled[i] = lam / denom * coeff[i];
  }
  RidgeSolution out;
  out.x = spec.eigenvectors * scaled;
  // Objective in the eigenbasis: sum (lam c_i' - c_i)^2 + lambda c_i'^2.
  double obj = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double r = spec.eigenvalues[i] * scaled[i] - coeff[i];
    obj += r * r + lambda * scaled[i] * scaled[i];
  }
  out.objective = obj;
  return out;
}

RidgeSolution exact_ridge_regression(const PsdMatrix& a, const Vector& y, double lambda) {
  RidgeSolution out = exact_ridge_regression(eig_psd(a), y, lambda);
  out.objective = ridge_objective(a.dense(), out.x, y, lambda);
  return out;
}

}  // namespace psdsketch
