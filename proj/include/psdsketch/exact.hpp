#pragma once

#include "psdsketch/matrix.hpp"
#include "psdsketch/types.hpp"

namespace psdsketch {

// Full eigendecomposition, eigenvalues sorted descending. Tiny negative
// eigenvalues (>= -1e-8 * lambda_1) are clamped to zero.
struct SpectralData {
  Vector eigenvalues;
  Matrix eigenvectors;

  Index n() const { return eigenvalues.size(); }
  // sum_{i >= k} lambda_i^2 and lambda_{k+1}^2 (0-based: index k).
  double frob_tail_sq(Index k) const;
  double spec_tail_sq(Index k) const;
};

SpectralData eig_psd(const PsdMatrix& a);
SpectralData eig_psd(const Matrix& sym);

// Throws NotPsdError when an eigenvalue is below -1e-6 * lambda_1.
PsdMatrix matrix_sqrt(const PsdMatrix& a);
Matrix matrix_sqrt(const SpectralData& spec);

struct BestRankK {
  LowRankFactor factor;  // left = U_k diag(lambda_k), right = U_k
  double frob_tail_sq = 0.0;
  double spec_tail_sq = 0.0;
};

BestRankK best_rank_k(const PsdMatrix& a, Index k);
BestRankK best_rank_k(const SpectralData& spec, Index k);

// tau_i^k(A) = a_i^T (A A^T + (||A - A_k||_F^2 / k) I)^+ a_i for the columns
// a_i of a general matrix.
RidgeScores exact_ridge_scores(const Matrix& a, Index k);
// Scores of the columns of A (power = 1) or of A^{1/2} (power = 0.5) for a PSD
// matrix, straight from its spectrum.
RidgeScores exact_ridge_scores_psd(const SpectralData& spec, Index k, double power);

// s_lambda = tr((A^2 + lambda I)^{-1} A^2) = sum_i lambda_i^2 / (lambda_i^2 + lambda)
double exact_statistical_dimension(const PsdMatrix& a, double lambda);
double exact_statistical_dimension(const Vector& eigenvalues, double lambda);

struct RidgeSolution {
  Vector x;
  double objective = 0.0;
};

// argmin_x ||Ax - y||^2 + lambda ||x||^2 for symmetric A.
RidgeSolution exact_ridge_regression(const PsdMatrix& a, const Vector& y, double lambda);
RidgeSolution exact_ridge_regression(const SpectralData& spec, const Vector& y, double lambda);

double ridge_objective(const Matrix& a, const Vector& x, const Vector& y, double lambda);

}  // namespace psdsketch
