#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psdsketch/exact.hpp"
#include "psdsketch/oracle.hpp"
#include "psdsketch/random.hpp"
#include "psdsketch/types.hpp"

namespace psdsketch {

enum class PcpKind { column_frob, row_frob, row_spectral, column_spectral };
enum class RowMode { frobenius, spectral };

std::string to_string(PcpKind kind);

struct PcpSketch {
  PcpKind kind = PcpKind::column_frob;
  // A S1 (n x t1) for column kinds, S2^T A S1 (t2 x t1) for row kinds.
  Matrix sketch;
  SampleSet columns;
  std::optional<SampleSet> rows;
  double eps = 0.0;
  Index k = 0;
  // Rank of the ridge scores the sample was drawn from (k for the column
  // kinds, k' for the row kinds).
  Index score_rank = 0;
  // Rank-k' sqrt-ridge scores behind a row-compatible column sample, reused
  // for the row sample so both are drawn from the same distribution.
  std::optional<RidgeScores> row_scores;
  // Filled in by verify_pcp for row_frob; never computed on the sublinear path.
  std::optional<double> delta_offset;
};

// Column count of the column PCP: c_sample * log(k / delta) / eps^2 * sum(l).
double column_pcp_size(const Vector& l, Index k, double eps, const AlgoConfig& config);
// Overestimates of the rank-k ridge scores of A from those of A^{1/2}:
// min(1, 2 sqrt(n/k) tau~).
Vector transfer_scores(const RidgeScores& sqrt_scores, Index n);

// A S1 with S1 drawn by the transferred sqrt-ridge scores.
PcpSketch column_pcp(PsdOracle& oracle, Index k, double eps, const AlgoConfig& config, Seed seed);
// Same sampling distribution with t scaled by `size_factor` (used for
// undersized negative controls; the PCP guarantee is not expected then).
PcpSketch column_pcp_scaled(PsdOracle& oracle, Index k, double eps, const AlgoConfig& config,
                            Seed seed, double size_factor);
// Spectral variant: samples by the rank-k ridge scores with an extra log n
// oversampling factor.
PcpSketch column_spectral_pcp(PsdOracle& oracle, Index k, double eps, const AlgoConfig& config,
                              Seed seed);

// Rank used for the row-sampling scores: ceil(c_rank k / eps) (frobenius) or
// ceil(c_rank k / eps^2) (spectral), capped at n - 1.
Index row_pcp_rank(Index n, Index k, double eps, RowMode mode, const AlgoConfig& config);
// Row-sampling weights l_i: sqrt(16 n eps / k) tau~ (frobenius) or
// 4 eps sqrt(n / k) tau~ (spectral).
Vector row_pcp_weights(const RidgeScores& sqrt_scores, Index n, Index k, double eps, RowMode mode);

// Column sample S1 drawn the way the row PCP needs it: from the rank-k'
// sqrt-ridge scores with the same weights as the row sample.
PcpSketch row_compatible_columns(PsdOracle& oracle, Index k, double eps, RowMode mode,
                                 const AlgoConfig& config, Seed seed);

// S2^T A S1 for a column sketch whose sample carries sqrt-ridge provenance of
// rank >= k'. Throws ValidationError on a provenance or dimension mismatch.
PcpSketch row_pcp(PsdOracle& oracle, const PcpSketch& col_sketch, Index k, double eps,
                  RowMode mode, const AlgoConfig& config, Seed seed);

struct PcpVerification {
  double worst_distortion = 0.0;
  std::vector<double> distortions;  // one per tested projection
  Index projections_tested = 0;
  // row_frob only
  double fitted_delta = 0.0;
  double delta_bound = 0.0;  // 600 ||A - A_k||_F^2
  bool delta_within_bound = true;
};

// A[:, S] * diag(w) read through the oracle, one read per distinct entry.
Matrix read_sampled_columns(PsdOracle& oracle, const SampleSet& cols);
// S_rows^T A S_cols read through the oracle.
Matrix read_sampled_block(PsdOracle& oracle, const SampleSet& rows, const SampleSet& cols);

// Checks the PCP inequality over `trials` random rank-k projections plus the
// adversarial battery: top-k and bottom-k eigen/singular directions and the
// projection that is optimal for the sketch. For column_spectral and
// row_spectral the distortion is |sketch - exact| / (exact + tail_F / k),
// which is <= eps exactly when the two-sided additive inequality holds.
PcpVerification verify_pcp(const PcpSketch& sketch, const PsdMatrix& a, Index trials, Seed seed);
PcpVerification verify_pcp(const PcpSketch& sketch, const PsdMatrix& a, const SpectralData& spec,
                           Index trials, Seed seed);

}  // namespace psdsketch
