#pragma once

#include "psdsketch/matrix.hpp"

namespace psdsketch {

// Singular values below this fraction of the largest are treated as zero
// wherever a pseudoinverse or numerical rank is taken.
inline constexpr double kPinvCutoff = 1e-10;

struct Svd {
  Matrix u;  // m x r
  Vector s;  // r, descending
  Matrix v;  // n x r
};

// Thin SVD via divide and conquer.
Svd thin_svd(const Matrix& m);

Index numerical_rank(const Vector& singular_values, double rel_cutoff = kPinvCutoff);

Matrix pinv(const Matrix& m, double rel_cutoff = kPinvCutoff);
// m^+ * rhs without forming m^+.
Matrix pinv_solve(const Matrix& m, const Matrix& rhs, double rel_cutoff = kPinvCutoff);

// Orthonormal basis for the column span via column-pivoted QR, truncated to
// the numerical rank.
Matrix orthonormal_basis(const Matrix& m, double rel_cutoff = kPinvCutoff);

// Top-r right singular vectors, as columns (cols(m) x r). r may exceed the
// rank; the extra columns then complete an orthonormal set.
Matrix top_right_singular_vectors(const Matrix& m, Index r);

// Best rank-r approximation of m (Eckart-Young).
Matrix truncate_rank(const Matrix& m, Index r);

// Exact ||m||_2 from the eigenvalues of the smaller Gram matrix.
double spectral_norm(const Matrix& m);
double spectral_norm_sq(const Matrix& m);

struct SymEig {
  Vector values;   // descending
  Matrix vectors;  // matching columns; empty when only values were requested
};

// Symmetric eigendecomposition. Reads the lower triangle.
SymEig symmetric_eig(const Matrix& sym, bool with_vectors = true);

// Eigenvalues of a symmetric matrix, descending.
Vector symmetric_eigenvalues(const Matrix& sym);

}  // namespace psdsketch
