#include "psdsketch/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "psdsketch/errors.hpp"
#include "psdsketch/linalg.hpp"

namespace psdsketch {

Matrix LowRankFactor::dense() const {
  return symmetric_psd ? Matrix(left * left.transpose()) : Matrix(left * right.transpose());
}

Vector LowRankFactor::apply(const Vector& x) const {
  const Matrix& r = symmetric_psd ? left : right;
  return left * (r.transpose() * x);
}

void AlgoConfig::validate() const {
  const double multipliers[] = {c_rank, c_prime, c_sample, c1, c2, c3, c4, c5, c_ridge, inner_eps};
  for (double c : multipliers) {
    if (!std::isfinite(c) || c <= 0.0) {
      throw ValidationError("AlgoConfig: every multiplier must be positive and finite");
    }
  }
  if (!(failure_delta > 0.0 && failure_delta < 1.0)) {
    throw ValidationError("AlgoConfig: failure_delta must lie in (0, 1)");
  }
  if (!(inner_eps < 1.0)) throw ValidationError("AlgoConfig: inner_eps must be < 1");
  if (max_retries < 0) throw ValidationError("AlgoConfig: max_retries must be >= 0");
}

std::string to_string(ScoreFamily::Source s) {
  switch (s) {
    case ScoreFamily::Source::sqrt_ridge: return "sqrt_ridge";
    case ScoreFamily::Source::row_norms: return "row_norms";
    case ScoreFamily::Source::uniform: return "uniform";
    case ScoreFamily::Source::given: return "given";
  }
  return "?";
}

std::vector<Index> SampleSet::distinct() const {
  std::vector<Index> out = indices;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool SampleSet::has_family(ScoreFamily::Source s, Index min_rank) const {
  return std::any_of(provenance.begin(), provenance.end(), [&](const ScoreFamily& f) {
    return f.source == s && f.rank >= min_rank;
  });
}

Matrix SampleSet::apply_right(const Matrix& m) const {
  if (m.cols() != universe) throw ValidationError("SampleSet: dimension mismatch");
  Matrix out(m.rows(), t());
  for (Index j = 0; j < t(); ++j) out.col(j) = weights[j] * m.col(indices[j]);
  return out;
}

Matrix SampleSet::apply_left(const Matrix& m) const {
  if (m.rows() != universe) throw ValidationError("SampleSet: dimension mismatch");
  Matrix out(t(), m.cols());
  for (Index j = 0; j < t(); ++j) out.row(j) = weights[j] * m.row(indices[j]);
  return out;
}

SampleSet scores_to_sampleset(const Vector& scores, Index t, Rng& rng) {
  if (t < 1) throw ValidationError("scores_to_sampleset: t must be >= 1");
  if (scores.size() == 0) throw ValidationError("scores_to_sampleset: empty score vector");
  if (!scores.allFinite() || (scores.array() <= 0.0).any()) {
    throw ValidationError("scores_to_sampleset: scores must be positive and finite");
  }
  const Index n = scores.size();
  SampleSet out;
  out.universe = n;
  out.probabilities = scores / scores.sum();
  std::vector<double> cdf(static_cast<std::size_t>(n));
  std::partial_sum(out.probabilities.begin(), out.probabilities.end(), cdf.begin());
  const double total = cdf.back();
  out.indices.reserve(static_cast<std::size_t>(t));
  out.weights.reserve(static_cast<std::size_t>(t));
  for (Index j = 0; j < t; ++j) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    auto idx = static_cast<Index>(it - cdf.begin());
    idx = std::min(idx, n - 1);
    // Skip zero-width cells that upper_bound can land on after rounding.
    while (out.probabilities[idx] <= 0.0 && idx > 0) --idx;
    out.indices.push_back(idx);
    out.weights.push_back(1.0 / std::sqrt(static_cast<double>(t) * out.probabilities[idx]));
  }
  return out;
}

SampleSet scores_to_sampleset(const Vector& scores, Index t, Seed seed) {
  Rng rng(seed, "scores_to_sampleset");
  return scores_to_sampleset(scores, t, rng);
}

SampleSet exhaustive_sample(Index n, std::vector<ScoreFamily> provenance) {
  SampleSet out;
  out.universe = n;
  out.indices.resize(static_cast<std::size_t>(n));
  std::iota(out.indices.begin(), out.indices.end(), Index{0});
  out.weights.assign(static_cast<std::size_t>(n), 1.0);
  out.probabilities = Vector::Constant(n, 1.0 / static_cast<double>(n));
  out.provenance = std::move(provenance);
  out.exhaustive = true;
  return out;
}

SampleSet sample_or_exhaust(const Vector& scores, double t_target, Rng& rng,
                            std::vector<ScoreFamily> provenance) {
  const Index n = scores.size();
  if (!(t_target > 0.0) || !std::isfinite(t_target)) {
    throw ValidationError("sample size must be positive and finite");
  }
  if (t_target >= static_cast<double>(n)) return exhaustive_sample(n, std::move(provenance));
  const auto t = std::max<Index>(1, static_cast<Index>(std::ceil(t_target)));
  if (t >= n) return exhaustive_sample(n, std::move(provenance));
  SampleSet out = scores_to_sampleset(scores, t, rng);
  out.provenance = std::move(provenance);
  return out;
}

Vector row_norm_scores(const Matrix& basis) {
  Vector s = basis.rowwise().squaredNorm();
  const double total = s.sum();
  const double floor = total > 0.0 ? 1e-14 * total / static_cast<double>(std::max<Index>(1, s.size())) : 1.0;
  return s.cwiseMax(floor);
}

bool subspace_embedding_check(const Matrix& a_cols, const SampleSet& sample, double eps) {
  if (sample.universe != a_cols.cols()) {
    throw ValidationError("subspace_embedding_check: dimension mismatch");
  }
  const Svd svd = thin_svd(a_cols);
  const Index r = numerical_rank(svd.s);
  if (r == 0) return true;
  const Matrix c = sample.apply_right(a_cols);
  // Whitened: Sigma^{-1} U^T C C^T U Sigma^{-1} has the generalized eigenvalues.
  const Matrix w = svd.s.head(r).cwiseInverse().asDiagonal() * (svd.u.leftCols(r).transpose() * c);
  const Vector mu = symmetric_eigenvalues(w * w.transpose());
  return mu[0] <= 1.0 + eps && mu[r - 1] >= 1.0 - eps;
}

}  // namespace psdsketch
