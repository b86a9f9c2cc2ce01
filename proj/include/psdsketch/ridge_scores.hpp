#pragma once

#include "psdsketch/oracle.hpp"
#include "psdsketch/random.hpp"
#include "psdsketch/types.hpp"

namespace psdsketch {

// Factor applied to the raw sampled estimates. A sample whose Gram matrix is
// within a factor (1 +- 1/2) of the true one gives raw estimates in
// [2/3 tau, 2 tau]; scaling by 3/2 turns that into [tau, 3 tau].
inline constexpr double kScoreScale = 1.5;

// Overestimates of the rank-k ridge leverage scores of A^{1/2}, computed from
// entries of A only. Recursive uniform halving with resampling by the
// estimated scores at every level; the smallest level is solved exactly.
// Reads every diagonal entry plus O(n * sample size) off-diagonal ones.
RidgeScores approx_sqrt_ridge_scores(PsdOracle& oracle, Index k, const AlgoConfig& config,
                                     Seed seed);
RidgeScores approx_sqrt_ridge_scores(PsdOracle& oracle, Index k, const AlgoConfig& config,
                                     Rng rng);

}  // namespace psdsketch
