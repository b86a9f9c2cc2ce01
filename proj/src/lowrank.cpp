#include "psdsketch/lowrank.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "psdsketch/errors.hpp"
#include "psdsketch/generators.hpp"
#include "psdsketch/linalg.hpp"
#include "psdsketch/pcp.hpp"
#include "psdsketch/ridge_scores.hpp"
#include "psdsketch/sampling.hpp"

namespace psdsketch {

bool RunReport::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

namespace {

// A sampled matrix lost rank; the caller retries with a fresh stream.
struct DegenerateSample : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CoreOutput {
  Matrix q;  // n x r, r <= k, orthonormal (or M for the symmetric case)
  Matrix n;  // n x r
  bool symmetric = false;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void check_params(Index n, Index k, double eps) {
  if (n < 2) throw ValidationError("matrix dimension must be at least 2");
  if (k < 1 || k >= n) throw ValidationError("k must satisfy 1 <= k < n");
  if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("eps must lie in (0, 1]");
}

double log_factor(Index n, const AlgoConfig& config) {
  return config.oversample_log ? std::log(static_cast<double>(n)) : 1.0;
}

// Sample over the t columns of an outer sample, expressed over [n].
SampleSet compose(const SampleSet& outer, const SampleSet& inner) {
  SampleSet out;
  out.universe = outer.universe;
  out.provenance = inner.provenance;
  for (Index j = 0; j < inner.t(); ++j) {
    const Index via = inner.indices[static_cast<std::size_t>(j)];
    out.indices.push_back(outer.indices[static_cast<std::size_t>(via)]);
    out.weights.push_back(outer.weights[static_cast<std::size_t>(via)] * inner.weights[static_cast<std::size_t>(j)]);
  }
  return out;
}

// S^T A for a row sample, read through the oracle.
Matrix read_sampled_rows(PsdOracle& oracle, const SampleSet& rows) {
  const auto distinct = rows.distinct();
  const Matrix block = oracle.rows(distinct);
  std::unordered_map<Index, Index> where;
  for (std::size_t a = 0; a < distinct.size(); ++a) where[distinct[a]] = static_cast<Index>(a);
  Matrix out(rows.t(), oracle.n());
  for (Index j = 0; j < rows.t(); ++j) out.row(j) = rows.weights[j] * block.row(where.at(rows.indices[j]));
  return out;
}

Index distinct_count(const SampleSet& s) { return static_cast<Index>(s.distinct().size()); }

Matrix pad_columns(const Matrix& m, Index k) {
  if (m.cols() >= k) return m;
  Matrix out = Matrix::Zero(m.rows(), k);
  out.leftCols(m.cols()) = m;
  return out;
}

void note_sample(RunReport& report, const std::string& name, const SampleSet& s) {
  report.plan[name] = static_cast<double>(s.t());
  if (s.exhaustive) report.flags.push_back("exhaustive_" + name);
}

// Best rank-k approximation from the full matrix, for sizes where sampling
// cannot be smaller than reading everything.
CoreOutput dense_path(PsdOracle& oracle, Index k, bool symmetric) {
  const Index n = oracle.n();
  std::vector<Index> all(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  const Matrix a = oracle.columns(all);
  const SpectralData spec = eig_psd(Matrix(0.5 * (a + a.transpose())));
  CoreOutput out;
  if (symmetric) {
    Index r = 0;
    while (r < k && spec.eigenvalues[r] > 0.0) ++r;
    out.q = spec.eigenvectors.leftCols(r) * spec.eigenvalues.head(r).cwiseSqrt().asDiagonal();
    out.n = out.q;
    out.symmetric = true;
  } else {
    out.q = spec.eigenvectors.leftCols(k);
    out.n = a * out.q;
  }
  return out;
}

template <typename Core>
LowRankResult run_with_retries(const std::string& name, PsdOracle& oracle, Index k, double eps,
                               const AlgoConfig& config, Seed seed, Core&& core) {
  config.validate();
  check_params(oracle.n(), k, eps);
  Stopwatch clock;
  const std::uint64_t before = oracle.access_count();
  Rng root(seed, name);
  LowRankResult result;
  RunReport& report = result.report;
  report.algorithm = name;
  report.n = oracle.n();
  report.k = k;
  report.eps = eps;
  report.seed = seed.value;
  report.constants = config;
  std::uint64_t budget = 0;
  CoreOutput out;
  for (int attempt = 0;; ++attempt) {
    try {
      RunReport scratch = report;
      scratch.flags.clear();
      scratch.plan.clear();
      out = core(root.split(static_cast<std::uint64_t>(attempt)), scratch, budget);
      report.flags.insert(report.flags.end(), scratch.flags.begin(), scratch.flags.end());
      report.plan = scratch.plan;
      report.retries = attempt;
      break;
    } catch (const DegenerateSample& e) {
      if (attempt >= config.max_retries) {
        throw NumericalError(name + ": sampled matrix stayed rank deficient after " +
                             std::to_string(config.max_retries) + " retries (" + e.what() + ")");
      }
      report.flags.push_back("retry");
    }
  }
  result.factor.left = pad_columns(out.q, k);
  result.factor.right = pad_columns(out.n, k);
  result.factor.symmetric_psd = out.symmetric;
  report.accesses = oracle.access_count() - before;
  report.access_budget = budget;
  report.wall_ms = clock.ms();
  return result;
}

std::uint64_t mul(Index a, Index b) { return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b); }

CoreOutput algorithm1_core(PsdOracle& oracle, Index k, double eps, const AlgoConfig& config, Rng rng,
                           RunReport& report, std::uint64_t& budget, Algorithm1Trace* trace) {
  const Index n = oracle.n();
  const auto k1 = std::max(k, static_cast<Index>(std::ceil(config.c_rank * static_cast<double>(k) / eps)));
  report.plan["k1"] = static_cast<double>(k1);
  if (4 * k >= n || k1 >= n) {
    report.flags.push_back("dense_fallback");
    budget += mul(n, n + 1) / 2;
    CoreOutput out = dense_path(oracle, k, false);
    if (trace) {
      trace->s1 = exhaustive_sample(n);
      trace->k1 = std::min(k1, n);
      trace->z = Matrix::Identity(n, n).leftCols(trace->k1);
      trace->q = out.q;
    }
    return out;
  }
  const Index r2 = std::min<Index>(n - 1, static_cast<Index>(std::ceil(config.c_prime * static_cast<double>(k1))));
  report.plan["score_rank_2"] = static_cast<double>(r2);

  // Step 1
  const std::uint64_t before_scores = oracle.access_count();
  const RidgeScores tau_k = approx_sqrt_ridge_scores(oracle, k, config, rng.split("scores_k"));
  const RidgeScores tau_r = r2 == k ? tau_k : approx_sqrt_ridge_scores(oracle, r2, config, rng.split("scores_k1"));
  budget += oracle.access_count() - before_scores;

  // Steps 2-3
  const double nd = static_cast<double>(n);
  const Vector l1 = (std::sqrt(nd / static_cast<double>(k)) * tau_k.scores +
                     std::sqrt(nd * std::pow(eps, 4) / static_cast<double>(k1)) * tau_r.scores)
                        .cwiseMin(1.0);
  const Vector l2 = (std::sqrt(nd / static_cast<double>(k1)) * tau_r.scores).cwiseMin(1.0);
  const double lf = log_factor(n, config);
  Rng r_s1 = rng.split("S1");
  Rng r_s2 = rng.split("S2");
  const SampleSet s1 = sample_or_exhaust(l1, config.c1 * lf / (eps * eps) * l1.sum(), r_s1,
                                         {{ScoreFamily::Source::sqrt_ridge, k},
                                          {ScoreFamily::Source::sqrt_ridge, r2}});
  const SampleSet s2 = sample_or_exhaust(l2, config.c2 * lf * l2.sum(), r_s2,
                                         {{ScoreFamily::Source::sqrt_ridge, r2}});
  note_sample(report, "t1", s1);
  note_sample(report, "t2", s2);

  // Step 4
  const Matrix sketch = read_sampled_block(oracle, s2, s1);
  budget += mul(distinct_count(s2), distinct_count(s1));
  const Index kz = std::min(k1, s1.t());
  const Matrix z = sketch_rank_span(sketch, kz);

  // Step 5
  const double kd = static_cast<double>(k);
  const double t3 = config.c3 * (kd * std::log(kd / eps) / eps + kd / (eps * eps));
  Rng r_s3 = rng.split("S3");
  const SampleSet s3 = sample_or_exhaust(row_norm_scores(z), t3, r_s3, {{ScoreFamily::Source::row_norms, 0}});
  note_sample(report, "t3", s3);
  const SampleSet s13 = compose(s1, s3);
  const Matrix as13 = read_sampled_columns(oracle, s13);
  budget += mul(n, distinct_count(s13));
  const Matrix v = orthonormal_basis(as13);
  if (v.cols() == 0) {
    report.flags.push_back("zero_sketch");
    return CoreOutput{Matrix::Zero(n, 0), Matrix::Zero(n, 0), false};
  }

  // Step 6
  const double t3r = static_cast<double>(s3.t());
  const double t4 = config.c4 * t3r * std::log(std::max(t3r, 2.0)) / (eps * eps);
  Rng r_s4 = rng.split("S4");
  const SampleSet s4 = sample_or_exhaust(row_norm_scores(v), t4, r_s4, {{ScoreFamily::Source::row_norms, 0}});
  note_sample(report, "t4", s4);
  const Matrix b = read_sampled_block(oracle, s4, s1);
  budget += mul(distinct_count(s4), distinct_count(s1));
  const Matrix p = s3.apply_right(b);
  if (numerical_rank(thin_svd(p).s) < v.cols()) throw DegenerateSample("S4^T A S1 S3");
  const Matrix w = constrained_rank_k_regression(p, b, z, k);

  // Step 7
  const Svd wsvd = thin_svd(w);
  const Index wr = std::min<Index>(k, numerical_rank(wsvd.s));
  const Matrix q = orthonormal_basis(as13 * wsvd.u.leftCols(wr));
  const double t5 = config.c5 * (kd * std::log(kd) + kd / eps);
  Rng r_s5 = rng.split("S5");
  const SampleSet s5 = sample_or_exhaust(row_norm_scores(q), std::max(t5, 1.0), r_s5,
                                         {{ScoreFamily::Source::row_norms, 0}});
  note_sample(report, "t5", s5);
  const Matrix rows = read_sampled_rows(oracle, s5);
  budget += mul(n, distinct_count(s5));
  if (q.cols() > 0 && numerical_rank(thin_svd(s5.apply_left(q)).s) < q.cols()) {
    throw DegenerateSample("S5^T Q");
  }
  if (trace) {
    trace->s1 = s1;
    trace->z = z;
    trace->q = q;
    trace->k1 = k1;
  }
  // Step 8
  return CoreOutput{q, sampled_regression(q, s5, rows), false};
}

CoreOutput algorithm2_core(PsdOracle& oracle, Index k, double eps, const AlgoConfig& config, Rng rng,
                           RunReport& report, std::uint64_t& budget, Algorithm2Trace* trace) {
  const Index n = oracle.n();
  const auto k1_raw =
      std::max(k, static_cast<Index>(std::ceil(config.c_rank * static_cast<double>(k) / (eps * eps))));
  const Index k1 = std::min(k1_raw, n - 1);
  report.plan["k1"] = static_cast<double>(k1);
  if (4 * k >= n) {
    report.flags.push_back("dense_fallback");
    budget += mul(n, n + 1) / 2;
    CoreOutput out = dense_path(oracle, k, false);
    if (trace) {
      trace->s1 = exhaustive_sample(n);
      trace->z = Matrix::Identity(n, n).leftCols(k);
      trace->q = out.q;
      trace->k1 = k1;
    }
    return out;
  }
  // Step 1
  const std::uint64_t before_scores = oracle.access_count();
  const RidgeScores tau = approx_sqrt_ridge_scores(oracle, k1, config, rng.split("scores"));
  budget += oracle.access_count() - before_scores;

  // Step 2
  const double nd = static_cast<double>(n);
  const Vector l = (4.0 * eps * std::sqrt(nd / static_cast<double>(k)) * tau.scores).cwiseMin(1.0);
  const double t1 = config.c1 * log_factor(n, config) / (eps * eps) * l.sum();
  Rng r_s1 = rng.split("S1");
  Rng r_s2 = rng.split("S2");
  const SampleSet s1 = sample_or_exhaust(l, t1, r_s1, {{ScoreFamily::Source::sqrt_ridge, k1}});
  const SampleSet s2 = sample_or_exhaust(l, t1, r_s2, {{ScoreFamily::Source::sqrt_ridge, k1}});
  note_sample(report, "t1", s1);
  note_sample(report, "t2", s2);

  // Step 3
  const Matrix sketch = read_sampled_block(oracle, s2, s1);
  budget += mul(distinct_count(s2), distinct_count(s1));
  const Index kz = std::min(k, s1.t());
  const Matrix z = sketch_rank_span(sketch, kz);

  // Step 4
  const double kd = static_cast<double>(k);
  const double t3 = config.c3 * (kd * std::log(kd) + kd * kd / eps);
  Rng r_s3 = rng.split("S3");
  const SampleSet s3 = sample_or_exhaust(row_norm_scores(z), t3, r_s3, {{ScoreFamily::Source::row_norms, 0}});
  note_sample(report, "t3", s3);
  const SampleSet s13 = compose(s1, s3);
  const Matrix as13 = read_sampled_columns(oracle, s13);
  budget += mul(n, distinct_count(s13));
  const Matrix zs3 = s3.apply_left(z);  // (Z^T S3)^T
  if (numerical_rank(thin_svd(zs3).s) < kz) throw DegenerateSample("Z^T S3");
  const Matrix m = pinv_solve(zs3, as13.transpose()).transpose();

  // Step 5
  const Matrix q = orthonormal_basis(m);
  const double t4 = config.c4 * (kd * std::log(kd) + kd * kd / eps);
  Rng r_s4 = rng.split("S4");
  const SampleSet s4 = sample_or_exhaust(row_norm_scores(q), std::max(t4, 1.0), r_s4,
                                         {{ScoreFamily::Source::row_norms, 0}});
  note_sample(report, "t4", s4);
  const Matrix rows = read_sampled_rows(oracle, s4);
  budget += mul(n, distinct_count(s4));
  if (q.cols() > 0 && numerical_rank(thin_svd(s4.apply_left(q)).s) < q.cols()) {
    throw DegenerateSample("S4^T Q");
  }
  if (trace) {
    trace->s1 = s1;
    trace->z = z;
    trace->q = q;
    trace->k1 = k1;
  }
  return CoreOutput{q, sampled_regression(q, s4, rows), false};
}

}  // namespace

Matrix sketch_rank_span(const Matrix& sketch, Index k1) {
  if (k1 < 0) throw ValidationError("sketch_rank_span: negative rank");
  return top_right_singular_vectors(sketch, std::min(k1, sketch.cols()));
}

Matrix constrained_rank_k_regression(const Matrix& p, const Matrix& b, const Matrix& z, Index k) {
  if (p.rows() != b.rows() || b.cols() != z.rows()) {
    throw ValidationError("constrained_rank_k_regression: dimension mismatch");
  }
  if (k < 0) throw ValidationError("constrained_rank_k_regression: negative rank");
  // ||P W Z^T - B||^2 = ||P W - B Z||^2 + const; the rank-k minimizer projects
  // B Z onto range(P), truncates, and maps back through P^+.
  const Svd ps = thin_svd(p);
  const Index r = numerical_rank(ps.s);
  const Matrix up = ps.u.leftCols(r);
  const Matrix target = up * (up.transpose() * (b * z));
  const Matrix best = truncate_rank(target, k);
  return pinv_solve(p, best);
}

Matrix sampled_regression(const Matrix& q, const SampleSet& rows, const Matrix& sampled_rows) {
  if (rows.universe != q.rows() || sampled_rows.rows() != rows.t()) {
    throw ValidationError("sampled_regression: dimension mismatch");
  }
  const Matrix sq = rows.apply_left(q);
  return pinv_solve(sq, sampled_rows).transpose();
}

LowRankResult algorithm1_frobenius(PsdOracle& oracle, Index k, double eps, const AlgoConfig& config,
                                   Seed seed, Algorithm1Trace* trace) {
  return run_with_retries("algorithm1_frobenius", oracle, k, eps, config, seed,
                          [&](Rng rng, RunReport& rep, std::uint64_t& budget) {
                            return algorithm1_core(oracle, k, eps, config, rng, rep, budget, trace);
                          });
}

LowRankResult algorithm2_spectral(PsdOracle& oracle, Index k, double eps, const AlgoConfig& config,
                                  Seed seed, Algorithm2Trace* trace) {
  return run_with_retries("algorithm2_spectral", oracle, k, eps, config, seed,
                          [&](Rng rng, RunReport& rep, std::uint64_t& budget) {
                            return algorithm2_core(oracle, k, eps, config, rng, rep, budget, trace);
                          });
}

LowRankResult psd_output(PsdOracle& oracle, Index k, double eps, const AlgoConfig& config, Seed seed,
                         PsdOutputTrace* trace) {
  return run_with_retries(
      "psd_output", oracle, k, eps, config, seed,
      [&](Rng rng, RunReport& rep, std::uint64_t& budget) -> CoreOutput {
        const Index n = oracle.n();
        const auto m = std::max(k, static_cast<Index>(std::ceil(config.c_rank * static_cast<double>(k) / eps)));
        rep.plan["m"] = static_cast<double>(m);
        if (4 * m >= n) {
          rep.flags.push_back("dense_fallback");
          budget += mul(n, n + 1) / 2;
          CoreOutput out = dense_path(oracle, k, true);
          if (trace) {
            trace->basis_rank = n;
            trace->x_eigenvalues = out.q.colwise().squaredNorm().transpose();
          }
          if (out.q.cols() == 0) rep.flags.push_back("rank_zero");
          return out;
        }
        // Basis Z of rank m from the spectral pipeline at constant accuracy.
        RunReport inner;
        std::uint64_t inner_budget = 0;
        const CoreOutput basis = algorithm2_core(oracle, m, config.inner_eps, config, rng.split("basis"),
                                                 inner, inner_budget, nullptr);
        budget += inner_budget;
        for (const auto& [key, value] : inner.plan) rep.plan["basis_" + key] = value;
        for (const auto& f : inner.flags) rep.flags.push_back("basis_" + f);
        const Matrix& z = basis.q;
        const Index mz = z.cols();
        if (mz == 0) {
          rep.flags.push_back("rank_zero");
          return CoreOutput{Matrix::Zero(n, 0), Matrix::Zero(n, 0), true};
        }
        const double md = static_cast<double>(mz);
        const double t1 = config.c1 * md * std::log(std::max(md, 2.0)) / (eps * eps);
        Rng r_s1 = rng.split("S1");
        const SampleSet s1 = sample_or_exhaust(row_norm_scores(z), t1, r_s1, {{ScoreFamily::Source::row_norms, 0}});
        note_sample(rep, "t1", s1);
        const Matrix rows = read_sampled_rows(oracle, s1);
        budget += mul(n, distinct_count(s1));
        const Matrix sz = s1.apply_left(z);
        if (numerical_rank(thin_svd(sz).s) < mz) throw DegenerateSample("S1^T Z");
        const Matrix bmat = pinv_solve(sz, rows * z);
        const Matrix sym = 0.5 * (bmat + bmat.transpose());
        const SymEig es = symmetric_eig(sym);
        const Vector& mu = es.values;
        const Matrix& u = es.vectors;
        Index keep = 0;
        while (keep < std::min(k, mu.size()) && mu[keep] > 0.0) ++keep;
        if (trace) {
          trace->basis_rank = mz;
          trace->x_eigenvalues = mu.head(keep);
        }
        if (keep == 0) {
          rep.flags.push_back("rank_zero");
          return CoreOutput{Matrix::Zero(n, 0), Matrix::Zero(n, 0), true};
        }
        const Matrix mfac = z * (u.leftCols(keep) * mu.head(keep).cwiseSqrt().asDiagonal());
        return CoreOutput{mfac, mfac, true};
      });
}

LowRankResult sqrt_route_baseline(PsdOracle& oracle, Index k, double eps, Seed seed,
                                  const AlgoConfig& config) {
  return run_with_retries(
      "sqrt_route_baseline", oracle, k, eps, config, seed,
      [&](Rng rng, RunReport& rep, std::uint64_t& budget) -> CoreOutput {
        const Index n = oracle.n();
        const double eps_inner = eps / (3.0 * std::sqrt(static_cast<double>(n)));
        const std::uint64_t before = oracle.access_count();
        const RidgeScores tau = approx_sqrt_ridge_scores(oracle, k, config, rng.split("scores"));
        budget += oracle.access_count() - before;
        const double kd = static_cast<double>(k);
        const double t = config.c_sample * (std::log(kd) + std::log(1.0 / config.failure_delta) / eps_inner) * tau.sum;
        Rng r_s = rng.split("S");
        const SampleSet s = sample_or_exhaust(tau.scores, t, r_s, {{ScoreFamily::Source::sqrt_ridge, k}});
        note_sample(rep, "t", s);
        const std::vector<Index> cols = s.distinct();
        rep.plan["distinct_columns"] = static_cast<double>(cols.size());
        const Matrix c = oracle.columns(cols);
        budget += mul(n, static_cast<Index>(cols.size()));
        Matrix core(static_cast<Index>(cols.size()), static_cast<Index>(cols.size()));
        for (std::size_t a = 0; a < cols.size(); ++a) core.row(static_cast<Index>(a)) = c.row(cols[a]);
        core = 0.5 * (core + core.transpose());
        const SpectralData cs = eig_psd(core);
        if (static_cast<Index>(cols.size()) == n) {
          // Every column sampled: A S (S^T A S)^+ S^T A = A, so the answer is A_k.
          const Index keep = std::min<Index>(k, numerical_rank(cs.eigenvalues.cwiseMax(0.0)));
          Matrix m = Matrix::Zero(n, keep);
          for (std::size_t a = 0; a < cols.size(); ++a) {
            m.row(cols[a]) = cs.eigenvectors.row(static_cast<Index>(a)).head(keep);
          }
          m = m * cs.eigenvalues.head(keep).cwiseSqrt().asDiagonal();
          return CoreOutput{m, m, true};
        }
        const Index r = numerical_rank(cs.eigenvalues.cwiseMax(0.0));
        const Matrix half_inv = cs.eigenvectors.leftCols(r) *
                                cs.eigenvalues.head(r).cwiseSqrt().cwiseInverse().asDiagonal();
        const Matrix f = c * half_inv;  // F F^T = A S (S^T A S)^+ S^T A
        // U_k sigma_k of F equals F V_k, with V_k from the small Gram F^T F.
        const Matrix gram = f.transpose() * f;
        const SpectralData gs = eig_psd(0.5 * (gram + gram.transpose()));
        const Index keep = std::min<Index>(k, numerical_rank(gs.eigenvalues.cwiseMax(0.0).cwiseSqrt()));
        const Matrix m = f * gs.eigenvectors.leftCols(keep);
        return CoreOutput{m, m, true};
      });
}

CounterexampleReport counterexample_demo(Index n, Index k, double eps, double alpha, double beta) {
  const Counterexample ce = gen_sqrt_route_counterexample(n, k, eps, alpha, beta);
  const Matrix& a = ce.a.dense();
  CounterexampleReport out;
  out.n = n;
  out.k = k;
  out.eps = eps;
  out.alpha = alpha;
  out.beta = beta;
  const SpectralData spec = eig_psd(ce.a);
  const Matrix root = matrix_sqrt(spec);
  out.sqrt_err_sq = (root - ce.b).squaredNorm();
  out.sqrt_opt_sq = spec.eigenvalues.tail(n - k).sum();  // sum of (sqrt lambda)^2 beyond k
  out.sqrt_ratio = out.sqrt_err_sq / out.sqrt_opt_sq;
  // Best approximation with rows in rowspan(B): project every row of A.
  const Matrix basis = orthonormal_basis(ce.b.transpose());
  const Matrix c = (a * basis) * basis.transpose();
  out.projection_err_sq = (a - c).squaredNorm();
  out.opt_frob_tail_sq = spec.frob_tail_sq(k);
  out.ratio = out.projection_err_sq / out.opt_frob_tail_sq;
  out.closed_form_bound = 1.0 + eps * static_cast<double>(n - k - 1) * alpha * alpha / (beta * beta);
  out.bound_holds = out.ratio >= out.closed_form_bound;
  return out;
}

void evaluate(RunReport& report, const LowRankFactor& factor, const PsdMatrix& a,
              const SpectralData& spec, ErrorNorm target, double bound_factor) {
  const Index k = report.k;
  const Matrix diff = a.dense() - factor.dense();
  const double frob = diff.squaredNorm();
  report.frob_err_sq = frob;
  report.opt_frob_tail_sq = spec.frob_tail_sq(k);
  report.opt_spec_tail_sq = spec.spec_tail_sq(k);
  const double slack = 1e-8 * a.frobenius_sq();
  auto ratio_of = [&](double attained, double opt) {
    if (opt > slack) return attained / opt;
    return attained <= slack ? 1.0 : std::numeric_limits<double>::infinity();
  };
  if (target == ErrorNorm::frobenius) {
    report.ratio = ratio_of(frob, *report.opt_frob_tail_sq);
    report.bound = bound_factor * *report.opt_frob_tail_sq;
    report.within_bound = frob <= *report.bound + slack;
    if (a.n() <= 2048) report.spec_err_sq = spectral_norm_sq(diff);
  } else {
    const double s = spectral_norm_sq(diff);
    report.spec_err_sq = s;
    report.ratio = ratio_of(s, *report.opt_spec_tail_sq);
    report.bound = bound_factor * *report.opt_spec_tail_sq +
                   (report.eps / static_cast<double>(k)) * *report.opt_frob_tail_sq;
    report.within_bound = s <= *report.bound + 1e-8 * spec.eigenvalues[0] * spec.eigenvalues[0];
  }
}

void write_lrkf(const LowRankFactor& f, std::ostream& out) {
  if (!f.symmetric_psd && (f.right.rows() != f.left.rows() || f.right.cols() != f.left.cols())) {
    throw ValidationError("write_lrkf: factor shapes disagree");
  }
  const Index n = f.left.rows();
  const Index k = f.left.cols();
  const Matrix& right = f.symmetric_psd ? f.left : f.right;
  out.write("LRKF", 4);
  detail::put_u32(out, 1);
  detail::put_u64(out, static_cast<std::uint64_t>(n));
  detail::put_u64(out, static_cast<std::uint64_t>(k));
  const char flag = f.symmetric_psd ? 1 : 0;
  out.write(&flag, 1);
  for (const Matrix* m : {&f.left, &right}) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < k; ++j) detail::put_f64(out, (*m)(i, j));
    }
  }
  if (!out) throw ValidationError("write_lrkf: write failed");
}

LowRankFactor read_lrkf(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "LRKF") throw ValidationError("read_lrkf: bad magic");
  if (detail::get_u32(in) != 1) throw ValidationError("read_lrkf: unsupported version");
  const std::uint64_t n = detail::get_u64(in);
  const std::uint64_t k = detail::get_u64(in);
  if (n > (1u << 24) || k > n) throw ValidationError("read_lrkf: implausible dimensions");
  char flag = 0;
  in.read(&flag, 1);
  if (!in || (flag != 0 && flag != 1)) throw ValidationError("read_lrkf: bad flag byte");
  LowRankFactor f;
  f.symmetric_psd = flag == 1;
  f.left.resize(static_cast<Index>(n), static_cast<Index>(k));
  f.right.resize(static_cast<Index>(n), static_cast<Index>(k));
  for (Matrix* m : {&f.left, &f.right}) {
    for (Index i = 0; i < static_cast<Index>(n); ++i) {
      for (Index j = 0; j < static_cast<Index>(k); ++j) (*m)(i, j) = detail::get_f64(in);
    }
  }
  return f;
}

void write_lrkf(const LowRankFactor& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  write_lrkf(f, out);
}

LowRankFactor read_lrkf(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  return read_lrkf(in);
}

}  // namespace psdsketch
