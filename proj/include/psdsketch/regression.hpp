#pragma once

#include <optional>

#include "psdsketch/exact.hpp"
#include "psdsketch/lowrank.hpp"
#include "psdsketch/oracle.hpp"

namespace psdsketch {

struct RidgeProblem {
  PsdOracle& oracle;
  Vector y;
  double lambda = 0.0;
  // Upper bound on the statistical dimension; estimated when absent.
  std::optional<double> s_lambda_hint;
};

struct RidgeResult {
  Vector x;
  RunReport report;
  LowRankFactor factor;  // the operator B the problem was solved against
};

// argmin_x ||B x - y||^2 + lambda ||x||^2 for B = left * right^T, solved
// exactly through the thin SVD of B.
Vector ridge_via_factor(const LowRankFactor& factor, const Vector& y, double lambda);

// Rank k = ceil(c_ridge s~ / eps^2); B from the spectral pipeline at accuracy
// inner_eps, then the exact solve against B. Falls back to the dense solve
// (with a report flag) when k >= n / 4.
RidgeResult sublinear_ridge(const RidgeProblem& problem, double eps, const AlgoConfig& config, Seed seed);

struct StatDimEstimate {
  double value = 0.0;      // the s~ hint
  Index accepted_k = 0;    // smallest accepted power of two (0 when exhausted)
  bool exhausted = false;  // no k < n / 2 passed; value is n
  std::uint64_t accesses = 0;
};

// Searches k over powers of two: builds a column PCP at eps = 1/2 and accepts
// k once sigma_{k+1}(sketch)^2 <= lambda / 8. Returns s~ = k / (4 c_ridge),
// which maps back to rank k under the eps = 1/2 formula of sublinear_ridge.
StatDimEstimate estimate_statistical_dimension(PsdOracle& oracle, double lambda, const AlgoConfig& config,
                                               Seed seed);

// Objective comparison against the exact optimum (test time only).
void evaluate_ridge(RunReport& report, const Vector& x, const PsdMatrix& a, const SpectralData& spec,
                    const Vector& y, double lambda, double eps);

}  // namespace psdsketch
