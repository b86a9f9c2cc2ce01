#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psdsketch/exact.hpp"
#include "psdsketch/oracle.hpp"
#include "psdsketch/random.hpp"
#include "psdsketch/types.hpp"

namespace psdsketch {

struct RunReport {
  std::string algorithm;
  Index n = 0;
  Index k = 0;
  double eps = 0.0;
  std::optional<double> lambda;
  std::uint64_t seed = 0;
  std::uint64_t accesses = 0;
  std::uint64_t access_budget = 0;
  double wall_ms = 0.0;

  // Filled in by evaluate_* against exact oracles (test time only).
  std::optional<double> frob_err_sq;
  std::optional<double> spec_err_sq;
  std::optional<double> opt_frob_tail_sq;
  std::optional<double> opt_spec_tail_sq;
  // attained error / exact optimum in the norm the algorithm targets
  std::optional<double> ratio;
  // the guaranteed error level for that norm, and whether it was met
  std::optional<double> bound;
  std::optional<bool> within_bound;

  AlgoConfig constants;
  int retries = 0;
  std::vector<std::string> flags;
  // Realized sample sizes and ranks (t1, t2, k1, ...).
  std::map<std::string, double> plan;

  bool has_flag(const std::string& f) const;
};

struct LowRankResult {
  LowRankFactor factor;
  RunReport report;
};

// Intermediate quantities of the Frobenius pipeline, kept for tests that
// check the bounds along the way.
struct Algorithm1Trace {
  SampleSet s1;
  Matrix z;  // t1 x k1
  Matrix q;  // n x k
  Index k1 = 0;
};

LowRankResult algorithm1_frobenius(PsdOracle& oracle, Index k, double eps, const AlgoConfig& config,
                                   Seed seed, Algorithm1Trace* trace = nullptr);

struct Algorithm2Trace {
  SampleSet s1;
  Matrix z;  // t1 x k
  Matrix q;  // n x k
  Index k1 = 0;
};

LowRankResult algorithm2_spectral(PsdOracle& oracle, Index k, double eps, const AlgoConfig& config,
                                  Seed seed, Algorithm2Trace* trace = nullptr);

struct PsdOutputTrace {
  Vector x_eigenvalues;  // eigenvalues kept in X~ (all >= 0, at most k)
  Index basis_rank = 0;  // m
};

LowRankResult psd_output(PsdOracle& oracle, Index k, double eps, const AlgoConfig& config, Seed seed,
                         PsdOutputTrace* trace = nullptr);

// Column sampling by sqrt-ridge scores at accuracy eps / (3 sqrt(n)), then
// (A S (S^T A S)^+ S^T A)_k through (S^T A S)^{+/2} and an SVD.
LowRankResult sqrt_route_baseline(PsdOracle& oracle, Index k, double eps, Seed seed,
                                  const AlgoConfig& config = {});

// Top-k1 right singular vectors of the small sketch (exact SVD).
Matrix sketch_rank_span(const Matrix& sketch, Index k1);

// argmin over rank-k W of ||P W Z^T - B||_F for orthonormal Z:
// W = P^+ [P P^+ B Z]_k.
Matrix constrained_rank_k_regression(const Matrix& p, const Matrix& b, const Matrix& z, Index k);

// N = ((S^T Q)^+ S^T A)^T given the sampled rows S^T A.
Matrix sampled_regression(const Matrix& q, const SampleSet& rows, const Matrix& sampled_rows);

struct CounterexampleReport {
  Index n = 0;
  Index k = 0;
  double eps = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double sqrt_err_sq = 0.0;      // ||A^{1/2} - B||_F^2
  double sqrt_opt_sq = 0.0;      // ||A^{1/2} - A^{1/2}_k||_F^2
  double sqrt_ratio = 0.0;
  double projection_err_sq = 0.0;  // ||A - C||_F^2, C = best fit in rowspan(B)
  double opt_frob_tail_sq = 0.0;
  double ratio = 0.0;              // projection_err_sq / opt_frob_tail_sq
  double closed_form_bound = 0.0;  // 1 + eps (n - k - 1) alpha^2 / beta^2
  bool bound_holds = false;
};

CounterexampleReport counterexample_demo(Index n, Index k, double eps, double alpha, double beta);

// Fills the error fields of a report. `target` selects which norm ratio and
// bound refer to.
enum class ErrorNorm { frobenius, spectral };
void evaluate(RunReport& report, const LowRankFactor& factor, const PsdMatrix& a,
              const SpectralData& spec, ErrorNorm target, double bound_factor);

// LRKF binary: "LRKF", u32 version = 1, u64 n, u64 k, u8 symmetric_psd, then
// left and right as f64 row-major, all little endian.
void write_lrkf(const LowRankFactor& f, std::ostream& out);
LowRankFactor read_lrkf(std::istream& in);
void write_lrkf(const LowRankFactor& f, const std::filesystem::path& path);
LowRankFactor read_lrkf(const std::filesystem::path& path);

}  // namespace psdsketch
