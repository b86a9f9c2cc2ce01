#include "psdsketch/ridge_scores.hpp"

#include <algorithm>
#include <cmath>

#include "psdsketch/errors.hpp"
#include "psdsketch/linalg.hpp"

namespace psdsketch {

namespace {

constexpr double kScoreFloor = 1e-12;

// Columns of A^{1/2} represented by (index, squared weight) pairs.
struct WeightedSet {
  std::vector<Index> indices;
  std::vector<double> weight_sq;
};

struct LevelEstimate {
  Vector raw;     // x_i^T (X S S^T X^T + ridge I)^{-1} x_i for i in the level set
  double ridge = 0.0;
};

class Estimator {
 public:
  Estimator(PsdOracle& oracle, const Vector& diag, Index k, const AlgoConfig& config, Rng& rng)
      : oracle_(oracle), diag_(diag), k_(k), config_(config), rng_(rng) {
    const double kd = std::max(2.0, static_cast<double>(k));
    base_size_ = static_cast<Index>(std::ceil(config.c_sample * kd * std::log(kd / config.failure_delta)));
    oversample_ = config.c_sample * std::log(kd / config.failure_delta);
    // Bernoulli halving overshoots log2(n) levels now and then, most often
    // when the base size is tiny.
    max_depth_ = 2 * static_cast<int>(std::ceil(std::log2(static_cast<double>(oracle.n())))) + 16;
  }

  // Weighted column sample whose Gram matrix approximates X_I X_I^T.
  WeightedSet sample(const std::vector<Index>& level, int depth) {
    if (depth > max_depth_) {
      throw NumericalError("approx_sqrt_ridge_scores: recursion did not terminate");
    }
    if (static_cast<Index>(level.size()) <= base_size_) {
      return WeightedSet{level, std::vector<double>(level.size(), 1.0)};
    }
    const WeightedSet inner = halve(level, depth);
    const LevelEstimate est = estimate(level, inner);
    WeightedSet out;
    for (std::size_t a = 0; a < level.size(); ++a) {
      const double score = std::clamp(kScoreScale * est.raw[static_cast<Index>(a)], kScoreFloor, 1.0);
      const double p = std::min(1.0, oversample_ * score);
      if (rng_.bernoulli(p)) {
        out.indices.push_back(level[a]);
        out.weight_sq.push_back(1.0 / p);
      }
    }
    return out;
  }

  // Sample of a uniform half of `level`, reweighted to stand in for all of it.
  WeightedSet halve(const std::vector<Index>& level, int depth) {
    std::vector<Index> half;
    for (Index i : level) {
      if (rng_.bernoulli(0.5)) half.push_back(i);
    }
    WeightedSet inner = sample(half, depth + 1);
    for (double& w : inner.weight_sq) w *= 2.0;  // X_half X_half^T ~ X_I X_I^T / 2
    return inner;
  }

  LevelEstimate top_level(const std::vector<Index>& all) {
    if (static_cast<Index>(all.size()) <= base_size_) {
      return estimate(all, WeightedSet{all, std::vector<double>(all.size(), 1.0)});
    }
    return estimate(all, halve(all, 0));
  }

  LevelEstimate estimate(const std::vector<Index>& level, const WeightedSet& s) {
    LevelEstimate out;
    const auto m = static_cast<Index>(level.size());
    double trace = 0.0;
    for (Index i : level) trace += diag_[i];
    const Index r = static_cast<Index>(s.indices.size());
    if (r == 0) {
      out.ridge = std::max(trace / static_cast<double>(k_), 1e-300);
      out.raw.resize(m);
      for (Index a = 0; a < m; ++a) out.raw[a] = diag_[level[static_cast<std::size_t>(a)]] / out.ridge;
      return out;
    }
    Vector w(r);
    for (Index j = 0; j < r; ++j) w[j] = std::sqrt(s.weight_sq[static_cast<std::size_t>(j)]);
    const Matrix core = w.asDiagonal() * oracle_.gather(s.indices, s.indices) * w.asDiagonal();
    const SymEig es = symmetric_eig(core);
    const Vector mu = es.values.cwiseMax(0.0);  // descending
    const Matrix cross = oracle_.gather(level, s.indices) * w.asDiagonal() * es.vectors;

    // Ridge = residual of the level's columns after projecting onto the top-k
    // directions of the sample, over k. Never below the true tail.
    const Vector col_energy = cross.cwiseAbs2().colwise().sum().transpose();
    const Index top = std::min(k_, r);
    const double mu_cut = 1e-12 * mu[0];
    double head = 0.0;
    for (Index j = 0; j < top; ++j) {
      if (mu[j] > mu_cut) head += col_energy[j] / mu[j];
    }
    out.ridge = std::max((trace - head) / static_cast<double>(k_), 1e-12 * trace);
    if (!(out.ridge > 0.0)) out.ridge = 1e-300;

    const Vector inv = (mu.array() + out.ridge).inverse().matrix();
    const Vector explained = cross.cwiseAbs2() * inv;
    out.raw.resize(m);
    for (Index a = 0; a < m; ++a) {
      const double d = diag_[level[static_cast<std::size_t>(a)]];
      out.raw[a] = std::max(0.0, d - explained[a]) / out.ridge;
    }
    return out;
  }

 private:
  PsdOracle& oracle_;
  const Vector& diag_;
  Index k_;
  const AlgoConfig& config_;
  Rng& rng_;
  Index base_size_ = 0;
  double oversample_ = 0.0;
  int max_depth_ = 0;
};

}  // namespace

RidgeScores approx_sqrt_ridge_scores(PsdOracle& oracle, Index k, const AlgoConfig& config,
                                     Rng rng) {
  config.validate();
  const Index n = oracle.n();
  if (k < 1 || k >= n) throw ValidationError("approx_sqrt_ridge_scores: need 1 <= k < n");
  const Vector diag = oracle.diagonal();
  std::vector<Index> all(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;

  // The top level stops after estimating: its scores are the output.
  Estimator est(oracle, diag, k, config, rng);
  const LevelEstimate final_est = est.top_level(all);

  RidgeScores out;
  out.k = k;
  out.target = RidgeScores::Target::of_sqrtA;
  out.ridge = final_est.ridge;
  out.scores = (kScoreScale * final_est.raw).cwiseMax(kScoreFloor).cwiseMin(1.0);
  out.sum = out.scores.sum();
  return out;
}

RidgeScores approx_sqrt_ridge_scores(PsdOracle& oracle, Index k, const AlgoConfig& config,
                                     Seed seed) {
  Rng rng(seed, "approx_sqrt_ridge_scores");
  return approx_sqrt_ridge_scores(oracle, k, config, rng);
}

}  // namespace psdsketch
