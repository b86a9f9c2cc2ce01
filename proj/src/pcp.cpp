#include "psdsketch/pcp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "psdsketch/errors.hpp"
#include "psdsketch/linalg.hpp"
#include "psdsketch/ridge_scores.hpp"
#include "psdsketch/sampling.hpp"

namespace psdsketch {

std::string to_string(PcpKind kind) {
  switch (kind) {
    case PcpKind::column_frob: return "column_frob";
    case PcpKind::row_frob: return "row_frob";
    case PcpKind::row_spectral: return "row_spectral";
    case PcpKind::column_spectral: return "column_spectral";
  }
  return "?";
}

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("eps must lie in (0, 1]");
}

double log_factor(Index n, const AlgoConfig& config) {
  return config.oversample_log ? std::log(static_cast<double>(n)) : 1.0;
}

// Position of every index of `sample` within its sorted distinct list.
std::vector<Index> positions(const SampleSet& sample, const std::vector<Index>& distinct) {
  std::unordered_map<Index, Index> where;
  for (std::size_t a = 0; a < distinct.size(); ++a) where[distinct[a]] = static_cast<Index>(a);
  std::vector<Index> out;
  out.reserve(sample.indices.size());
  for (Index i : sample.indices) out.push_back(where.at(i));
  return out;
}

}  // namespace

Matrix read_sampled_columns(PsdOracle& oracle, const SampleSet& cols) {
  const auto distinct = cols.distinct();
  const Matrix block = oracle.columns(distinct);
  const auto pos = positions(cols, distinct);
  Matrix out(oracle.n(), cols.t());
  for (Index j = 0; j < cols.t(); ++j) out.col(j) = cols.weights[j] * block.col(pos[j]);
  return out;
}

Matrix read_sampled_block(PsdOracle& oracle, const SampleSet& rows, const SampleSet& cols) {
  const auto rd = rows.distinct();
  const auto cd = cols.distinct();
  const Matrix block = oracle.gather(rd, cd);
  const auto rp = positions(rows, rd);
  const auto cp = positions(cols, cd);
  Matrix out(rows.t(), cols.t());
  for (Index j = 0; j < cols.t(); ++j) {
    for (Index i = 0; i < rows.t(); ++i) {
      out(i, j) = rows.weights[i] * cols.weights[j] * block(rp[i], cp[j]);
    }
  }
  return out;
}

double column_pcp_size(const Vector& l, Index k, double eps, const AlgoConfig& config) {
  const double kd = std::max(2.0, static_cast<double>(k));
  return config.c_sample * std::log(kd / config.failure_delta) / (eps * eps) * l.sum();
}

Vector transfer_scores(const RidgeScores& sqrt_scores, Index n) {
  const double scale = 2.0 * std::sqrt(static_cast<double>(n) / static_cast<double>(sqrt_scores.k));
  return (scale * sqrt_scores.scores).cwiseMin(1.0);
}

PcpSketch column_pcp_scaled(PsdOracle& oracle, Index k, double eps, const AlgoConfig& config,
                            Seed seed, double size_factor) {
  check_eps(eps);
  Rng rng(seed, "column_pcp");
  const RidgeScores scores = approx_sqrt_ridge_scores(oracle, k, config, rng.split("scores"));
  const Vector l = transfer_scores(scores, oracle.n());
  Rng srng = rng.split("S1");
  PcpSketch out;
  out.kind = PcpKind::column_frob;
  out.columns = sample_or_exhaust(l, column_pcp_size(l, k, eps, config) * size_factor, srng,
                                  {{ScoreFamily::Source::sqrt_ridge, k}});
  out.sketch = read_sampled_columns(oracle, out.columns);
  out.eps = eps;
  out.k = k;
  out.score_rank = k;
  return out;
}

PcpSketch column_pcp(PsdOracle& oracle, Index k, double eps, const AlgoConfig& config, Seed seed) {
  return column_pcp_scaled(oracle, k, eps, config, seed, 1.0);
}

PcpSketch column_spectral_pcp(PsdOracle& oracle, Index k, double eps, const AlgoConfig& config,
                              Seed seed) {
  check_eps(eps);
  Rng rng(seed, "column_spectral_pcp");
  const RidgeScores scores = approx_sqrt_ridge_scores(oracle, k, config, rng.split("scores"));
  const Vector l = transfer_scores(scores, oracle.n());
  const double t = config.c_sample * log_factor(oracle.n(), config) / (eps * eps) * l.sum();
  Rng srng = rng.split("S1");
  PcpSketch out;
  out.kind = PcpKind::column_spectral;
  out.columns = sample_or_exhaust(l, t, srng, {{ScoreFamily::Source::sqrt_ridge, k}});
  out.sketch = read_sampled_columns(oracle, out.columns);
  out.eps = eps;
  out.k = k;
  out.score_rank = k;
  return out;
}

Index row_pcp_rank(Index n, Index k, double eps, RowMode mode, const AlgoConfig& config) {
  const double denom = mode == RowMode::frobenius ? eps : eps * eps;
  const auto r = static_cast<Index>(std::ceil(config.c_rank * static_cast<double>(k) / denom));
  return std::clamp<Index>(std::max(r, k), 1, n - 1);
}

Vector row_pcp_weights(const RidgeScores& sqrt_scores, Index n, Index k, double eps, RowMode mode) {
  const double nk = static_cast<double>(n) / static_cast<double>(k);
  const double scale = mode == RowMode::frobenius ? std::sqrt(16.0 * eps * nk) : 4.0 * eps * std::sqrt(nk);
  return (scale * sqrt_scores.scores).cwiseMin(1.0);
}

namespace {

double row_sample_size(const Vector& l, Index n, double eps, const AlgoConfig& config) {
  return config.c_sample * log_factor(n, config) / (eps * eps) * l.sum();
}

}  // namespace

PcpSketch row_compatible_columns(PsdOracle& oracle, Index k, double eps, RowMode mode,
                                 const AlgoConfig& config, Seed seed) {
  check_eps(eps);
  const Index n = oracle.n();
  const Index kp = row_pcp_rank(n, k, eps, mode, config);
  Rng rng(seed, "row_compatible_columns");
  RidgeScores scores = approx_sqrt_ridge_scores(oracle, kp, config, rng.split("scores"));
  const Vector l = row_pcp_weights(scores, n, k, eps, mode);
  Rng srng = rng.split("S1");
  PcpSketch out;
  out.kind = mode == RowMode::frobenius ? PcpKind::column_frob : PcpKind::column_spectral;
  out.columns = sample_or_exhaust(l, row_sample_size(l, n, eps, config), srng,
                                  {{ScoreFamily::Source::sqrt_ridge, kp}});
  out.sketch = read_sampled_columns(oracle, out.columns);
  out.eps = eps;
  out.k = k;
  out.score_rank = kp;
  out.row_scores = std::move(scores);
  return out;
}

PcpSketch row_pcp(PsdOracle& oracle, const PcpSketch& col_sketch, Index k, double eps,
                  RowMode mode, const AlgoConfig& config, Seed seed) {
  check_eps(eps);
  const Index n = oracle.n();
  if (col_sketch.kind != PcpKind::column_frob && col_sketch.kind != PcpKind::column_spectral) {
    throw ValidationError("row_pcp: input must be a column sketch");
  }
  if (col_sketch.columns.universe != n || col_sketch.sketch.rows() != n) {
    throw ValidationError("row_pcp: column sketch does not match the oracle dimension");
  }
  const Index kp = row_pcp_rank(n, k, eps, mode, config);
  if (!col_sketch.columns.exhaustive &&
      !col_sketch.columns.has_family(ScoreFamily::Source::sqrt_ridge, kp)) {
    throw ValidationError("row_pcp: column sample was not drawn from rank-" + std::to_string(kp) +
                          " sqrt-ridge scores");
  }
  Rng rng(seed, "row_pcp");
  RidgeScores scores = (col_sketch.row_scores && col_sketch.row_scores->k == kp)
                           ? *col_sketch.row_scores
                           : approx_sqrt_ridge_scores(oracle, kp, config, rng.split("scores"));
  const Vector l = row_pcp_weights(scores, n, k, eps, mode);
  Rng srng = rng.split("S2");
  PcpSketch out;
  out.kind = mode == RowMode::frobenius ? PcpKind::row_frob : PcpKind::row_spectral;
  out.rows = sample_or_exhaust(l, row_sample_size(l, n, eps, config), srng,
                               {{ScoreFamily::Source::sqrt_ridge, kp}});
  out.columns = col_sketch.columns;
  out.sketch = read_sampled_block(oracle, *out.rows, out.columns);
  out.eps = eps;
  out.k = k;
  out.score_rank = kp;
  out.row_scores = std::move(scores);
  return out;
}

// ---------------------------------------------------------------------------
// Verification

namespace {

double relative_gap(double sketch_cost, double exact_cost) {
  if (exact_cost <= 0.0) {
    return sketch_cost <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::abs(sketch_cost - exact_cost) / exact_cost;
}

Matrix random_basis(Rng& rng, Index dim, Index k) { return random_orthonormal(rng, dim, k); }

// sigma_max^2 of (I - Q Q^T) applied to a Gram matrix G = M^T M on the
// projected side: lambda_max((I - P) G (I - P)).
double projected_spectral_sq(const Matrix& gram, const Matrix& q) {
  const Matrix gq = gram * q;
  Matrix m = gram - q * gq.transpose() - gq * q.transpose() + q * (q.transpose() * gq) * q.transpose();
  m = 0.5 * (m + m.transpose());
  return std::max(0.0, symmetric_eigenvalues(m)[0]);
}

}  // namespace

PcpVerification verify_pcp(const PcpSketch& sk, const PsdMatrix& a, Index trials, Seed seed) {
  return verify_pcp(sk, a, eig_psd(a), trials, seed);
}

PcpVerification verify_pcp(const PcpSketch& sk, const PsdMatrix& a, const SpectralData& spec,
                           Index trials, Seed seed) {
  const Index n = a.n();
  const Index k = sk.k;
  if (k < 1 || k >= n) throw ValidationError("verify_pcp: sketch rank out of range");
  Rng rng(seed, "verify_pcp");
  const double tail = spec.frob_tail_sq(k);
  PcpVerification out;
  const bool column_side = sk.kind == PcpKind::column_frob || sk.kind == PcpKind::column_spectral;
  const bool spectral = sk.kind == PcpKind::column_spectral || sk.kind == PcpKind::row_spectral;

  // Reference matrix R and sketch C share the projected side. Column kinds
  // project from the left (n-dim), row kinds from the right (t1-dim).
  const Matrix& dense = a.dense();
  Matrix ref = column_side ? dense : sk.columns.apply_right(dense);
  const Matrix& c = sk.sketch;
  if (!column_side) {
    // Work with transposes so every projection acts from the left.
    ref.transposeInPlace();
  }
  const Matrix cc = column_side ? c : Matrix(c.transpose());
  const Index dim = ref.rows();
  if (cc.rows() != dim) throw ValidationError("verify_pcp: sketch and matrix dimensions disagree");
  const Index kk = std::min(k, dim);

  std::vector<Matrix> battery;
  for (Index t = 0; t < trials; ++t) {
    Rng sub = rng.split(static_cast<std::uint64_t>(t));
    battery.push_back(random_basis(sub, dim, kk));
  }
  {
    const Svd rs = thin_svd(ref);
    battery.push_back(rs.u.leftCols(kk));                 // top-k of the reference
    battery.push_back(rs.u.rightCols(kk));                // bottom-k of the reference
    battery.push_back(thin_svd(cc).u.leftCols(kk));       // optimal for the sketch
    if (!column_side) {
      // A's top eigenvectors carried through S1.
      const Matrix mapped = sk.columns.apply_left(spec.eigenvectors.leftCols(k));
      const Matrix q = orthonormal_basis(mapped);
      if (q.cols() == kk) battery.push_back(q);
    } else {
      battery.push_back(spec.eigenvectors.rightCols(kk));  // bottom eigenvectors of A
    }
  }

  std::vector<double> sketch_cost, exact_cost;
  if (spectral) {
    const Matrix gr = ref * ref.transpose();
    const Matrix gc = cc * cc.transpose();
    for (const Matrix& q : battery) {
      exact_cost.push_back(projected_spectral_sq(gr, q));
      sketch_cost.push_back(projected_spectral_sq(gc, q));
    }
  } else {
    const double rn = ref.squaredNorm();
    const double cn = cc.squaredNorm();
    for (const Matrix& q : battery) {
      exact_cost.push_back(rn - (q.transpose() * ref).squaredNorm());
      sketch_cost.push_back(cn - (q.transpose() * cc).squaredNorm());
    }
  }
  out.projections_tested = static_cast<Index>(battery.size());

  if (sk.kind == PcpKind::row_frob) {
    // Least squares fit of a single offset on the relative residuals.
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < battery.size(); ++i) {
      if (exact_cost[i] <= 0.0) continue;
      const double w = 1.0 / (exact_cost[i] * exact_cost[i]);
      num += w * (exact_cost[i] - sketch_cost[i]);
      den += w;
    }
    out.fitted_delta = den > 0.0 ? num / den : 0.0;
    out.delta_bound = 600.0 * tail;
    out.delta_within_bound = std::abs(out.fitted_delta) <= out.delta_bound + 1e-9 * (1.0 + out.delta_bound);
    for (std::size_t i = 0; i < battery.size(); ++i) {
      out.distortions.push_back(relative_gap(sketch_cost[i] + out.fitted_delta, exact_cost[i]));
    }
  } else if (spectral) {
    const double additive = tail / static_cast<double>(k);
    for (std::size_t i = 0; i < battery.size(); ++i) {
      const double denom = exact_cost[i] + additive;
      out.distortions.push_back(denom > 0.0 ? std::abs(sketch_cost[i] - exact_cost[i]) / denom
                                            : relative_gap(sketch_cost[i], exact_cost[i]));
    }
  } else {
    for (std::size_t i = 0; i < battery.size(); ++i) {
      out.distortions.push_back(relative_gap(sketch_cost[i], exact_cost[i]));
    }
  }
  out.worst_distortion = *std::max_element(out.distortions.begin(), out.distortions.end());
  return out;
}

}  // namespace psdsketch
