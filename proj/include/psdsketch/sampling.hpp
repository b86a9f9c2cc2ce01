#pragma once

#include "psdsketch/random.hpp"
#include "psdsketch/types.hpp"

namespace psdsketch {

// t i.i.d. draws with replacement from p_i = scores_i / sum(scores) by
// inverse-CDF lookup; weight_j = 1 / sqrt(t p_{index_j}).
SampleSet scores_to_sampleset(const Vector& scores, Index t, Rng& rng);
SampleSet scores_to_sampleset(const Vector& scores, Index t, Seed seed);

// Same, but a (possibly fractional) target size is rounded up and, once it
// reaches the universe size, replaced by every index exactly once with unit
// weight. The provenance tag is attached either way.
SampleSet sample_or_exhaust(const Vector& scores, double t_target, Rng& rng,
                            std::vector<ScoreFamily> provenance);

// Every index once with unit weight.
SampleSet exhaustive_sample(Index n, std::vector<ScoreFamily> provenance = {});

// Squared row norms, the leverage scores of an orthonormal basis. Rows that
// are exactly zero get a tiny positive floor so they stay samplable.
Vector row_norm_scores(const Matrix& basis);

// Whether every generalized eigenvalue of C C^T against A A^T, on the column
// span of A, lies in [1 - eps, 1 + eps], where C = a_cols * S.
bool subspace_embedding_check(const Matrix& a_cols, const SampleSet& sample, double eps);

}  // namespace psdsketch
