#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psdsketch/matrix.hpp"

namespace psdsketch {

// Per-index rank-k ridge leverage scores (exact values or overestimates).
struct RidgeScores {
  enum class Target { of_A, of_sqrtA };

  Vector scores;
  Index k = 0;
  Target target = Target::of_A;
  double sum = 0.0;
  // Ridge regularizer used: ||M - M_k||_F^2 / k for the exact scores, the
  // trace-based proxy for the estimated ones.
  double ridge = 0.0;
};

// B = left * right^T, or left * left^T when symmetric_psd is set.
struct LowRankFactor {
  Matrix left;
  Matrix right;
  bool symmetric_psd = false;

  Index n() const { return left.rows(); }
  Index k() const { return left.cols(); }
  Matrix dense() const;
  // (left * right^T) x without forming the product.
  Vector apply(const Vector& x) const;
};

// Multipliers for every sample size and rank used by the pipelines. The
// theory only asks for "sufficiently large" constants; the defaults below are
// the ones the test suite pins unless it says otherwise.
struct AlgoConfig {
  double c_rank = 2.0;    // k1 = ceil(c_rank k / eps) or ceil(c_rank k / eps^2)
  double c_prime = 1.0;   // second score family of the Frobenius pipeline at rank c_prime k1
  double c_sample = 4.0;  // column PCP and score-estimation oversampling
  double c1 = 4.0;
  double c2 = 4.0;
  double c3 = 4.0;
  double c4 = 4.0;
  double c5 = 4.0;
  double c_ridge = 1.0;   // ridge rank k = ceil(c_ridge s_lambda / eps^2)
  double inner_eps = 0.5; // constant-accuracy inner runs (ridge, PSD output)
  bool oversample_log = true;
  double failure_delta = 0.01;
  int max_retries = 3;

  // Throws ValidationError unless every multiplier is positive and finite and
  // failure_delta lies in (0, 1).
  void validate() const;
};

// Where the sampling probabilities of a SampleSet came from. Downstream
// constructions check this before relying on a particular PCP guarantee.
struct ScoreFamily {
  enum class Source { sqrt_ridge, row_norms, uniform, given };
  Source source = Source::given;
  Index rank = 0;  // ridge rank for sqrt_ridge, otherwise 0
};

std::string to_string(ScoreFamily::Source s);

// Weighted sample with replacement: column j of S is weights[j] * e_{indices[j]}.
struct SampleSet {
  Index universe = 0;  // n
  std::vector<Index> indices;
  std::vector<double> weights;
  Vector probabilities;
  std::vector<ScoreFamily> provenance;
  // Set when the requested t reached the universe size and the sample was
  // replaced by every index once with unit weight.
  bool exhaustive = false;

  Index t() const { return static_cast<Index>(indices.size()); }
  // Distinct indices in increasing order.
  std::vector<Index> distinct() const;
  bool has_family(ScoreFamily::Source s, Index min_rank = 0) const;
  // M * S for an m x universe matrix M.
  Matrix apply_right(const Matrix& m) const;
  // S^T * M for a universe x m matrix M.
  Matrix apply_left(const Matrix& m) const;
};

}  // namespace psdsketch
