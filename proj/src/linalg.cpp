#include "psdsketch/linalg.hpp"

#include <algorithm>

#include "psdsketch/errors.hpp"

namespace psdsketch {

Svd thin_svd(const Matrix& m) {
  if (!m.allFinite()) throw NumericalError("thin_svd: non-finite input");
  Svd out;
  if (m.rows() == 0 || m.cols() == 0) {
    out.u = Matrix::Zero(m.rows(), 0);
    out.s = Vector::Zero(0);
    out.v = Matrix::Zero(m.cols(), 0);
    return out;
  }
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.u = svd.matrixU();
  out.s = svd.singularValues();
  out.v = svd.matrixV();
  return out;
}

Index numerical_rank(const Vector& s, double rel_cutoff) {
  if (s.size() == 0 || s[0] <= 0.0) return 0;
  const double cut = rel_cutoff * s[0];
  Index r = 0;
  while (r < s.size() && s[r] > cut) ++r;
  return r;
}

Matrix pinv(const Matrix& m, double rel_cutoff) {
  const Svd svd = thin_svd(m);
  const Index r = numerical_rank(svd.s, rel_cutoff);
  return svd.v.leftCols(r) * svd.s.head(r).cwiseInverse().asDiagonal() *
         svd.u.leftCols(r).transpose();
}

Matrix pinv_solve(const Matrix& m, const Matrix& rhs, double rel_cutoff) {
  if (m.rows() != rhs.rows()) throw ValidationError("pinv_solve: dimension mismatch");
  const Svd svd = thin_svd(m);
  const Index r = numerical_rank(svd.s, rel_cutoff);
  const Matrix proj = svd.u.leftCols(r).transpose() * rhs;
  return svd.v.leftCols(r) * (svd.s.head(r).cwiseInverse().asDiagonal() * proj);
}

Matrix orthonormal_basis(const Matrix& m, double rel_cutoff) {
  if (m.cols() == 0 || m.rows() == 0) return Matrix::Zero(m.rows(), 0);
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  const double top = qr.maxPivot();
  Index r = 0;
  if (top > 0.0) {
    qr.setThreshold(rel_cutoff);
    r = qr.rank();
  }
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), r);
  return q;
}

Matrix top_right_singular_vectors(const Matrix& m, Index r) {
  if (r < 0 || r > m.cols()) throw ValidationError("top_right_singular_vectors: bad rank");
  if (r == 0) return Matrix::Zero(m.cols(), 0);
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().leftCols(r);
}

Matrix truncate_rank(const Matrix& m, Index r) {
  const Svd svd = thin_svd(m);
  const Index keep = std::min<Index>(r, svd.s.size());
  return svd.u.leftCols(keep) * svd.s.head(keep).asDiagonal() * svd.v.leftCols(keep).transpose();
}

SymEig symmetric_eig(const Matrix& sym, bool with_vectors) {
  if (sym.rows() != sym.cols()) throw ValidationError("symmetric_eig: matrix must be square");
  if (!sym.allFinite()) throw NumericalError("symmetric_eig: non-finite input");
  SymEig out;
  if (sym.rows() == 0) {
    out.values = Vector::Zero(0);
    out.vectors = Matrix::Zero(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric_eig: eigensolver did not converge");
  out.values = es.eigenvalues().reverse();
  if (with_vectors) out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

Vector symmetric_eigenvalues(const Matrix& sym) { return symmetric_eig(sym, false).values; }

double spectral_norm_sq(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix gram = m.rows() <= m.cols() ? Matrix(m * m.transpose()) : Matrix(m.transpose() * m);
  return std::max(0.0, symmetric_eigenvalues(gram)[0]);
}

double spectral_norm(const Matrix& m) { return std::sqrt(spectral_norm_sq(m)); }

}  // namespace psdsketch
