#include "psdsketch/regression.hpp"

#include <chrono>
#include <cmath>

#include "psdsketch/errors.hpp"
#include "psdsketch/linalg.hpp"
#include "psdsketch/pcp.hpp"

namespace psdsketch {

Vector ridge_via_factor(const LowRankFactor& factor, const Vector& y, double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("ridge_via_factor: lambda must be positive");
  if (y.size() != factor.n()) throw ValidationError("ridge_via_factor: y has wrong length");
  const Matrix& right = factor.symmetric_psd ? factor.left : factor.right;
  if (factor.k() == 0) return Vector::Zero(y.size());
  // B = Ql (Rl Rr^T) Qr^T, then the SVD of the small core.
  Eigen::HouseholderQR<Matrix> ql(factor.left);
  Eigen::HouseholderQR<Matrix> qr(right);
  const Index k = factor.k();
  const Matrix lq = ql.householderQ() * Matrix::Identity(factor.n(), k);
  const Matrix rq = qr.householderQ() * Matrix::Identity(factor.n(), k);
  const Matrix lr = ql.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const Matrix rr = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const Svd core = thin_svd(lr * rr.transpose());
  const Vector s = core.s;
  const Vector proj = core.u.transpose() * (lq.transpose() * y);
  const Vector scaled = (s.array() / (s.array().square() + lambda) * proj.array()).matrix();
  return rq * (core.v * scaled);
}

RidgeResult sublinear_ridge(const RidgeProblem& problem, double eps, const AlgoConfig& config, Seed seed) {
  config.validate();
  PsdOracle& oracle = problem.oracle;
  const Index n = oracle.n();
  if (!(problem.lambda > 0.0)) throw ValidationError("sublinear_ridge: lambda must be positive");
  if (problem.y.size() != n) throw ValidationError("sublinear_ridge: y has wrong length");
  if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("sublinear_ridge: eps must lie in (0, 1]");
  if (problem.s_lambda_hint && !(*problem.s_lambda_hint > 0.0)) {
    throw ValidationError("sublinear_ridge: s_lambda hint must be positive");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t before = oracle.access_count();
  Rng rng(seed, "sublinear_ridge");

  RidgeResult out;
  std::vector<std::string> flags;
  double s_hint = 0.0;
  if (problem.s_lambda_hint) {
    s_hint = *problem.s_lambda_hint;
  } else {
    const StatDimEstimate est = estimate_statistical_dimension(oracle, problem.lambda, config,
                                                               Seed{rng.split("stat_dim").next_u64()});
    s_hint = est.value;
    flags.push_back("estimated_s_lambda");
    if (est.exhausted) flags.push_back("s_lambda_search_exhausted");
  }
  const auto k = static_cast<Index>(std::ceil(config.c_ridge * s_hint / (eps * eps)));
  if (4 * k >= n) {
    flags.push_back("dense_fallback");
    std::vector<Index> all(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    const Matrix a = oracle.columns(all);
    const SpectralData spec = eig_psd(Matrix(0.5 * (a + a.transpose())));
    out.x = exact_ridge_regression(spec, problem.y, problem.lambda).x;
    out.factor.left = spec.eigenvectors * spec.eigenvalues.asDiagonal();
    out.factor.right = spec.eigenvectors;
    out.report.algorithm = "sublinear_ridge";
    out.report.access_budget = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n + 1) / 2;
  } else {
    LowRankResult inner = algorithm2_spectral(oracle, std::max<Index>(1, k), config.inner_eps, config,
                                              Seed{rng.split("spectral").next_u64()});
    out.factor = std::move(inner.factor);
    out.x = ridge_via_factor(out.factor, problem.y, problem.lambda);
    out.report = std::move(inner.report);
    out.report.algorithm = "sublinear_ridge";
  }
  RunReport& rep = out.report;
  rep.flags.insert(rep.flags.end(), flags.begin(), flags.end());
  rep.plan["s_lambda_hint"] = s_hint;
  rep.plan["rank"] = static_cast<double>(k);
  rep.n = n;
  rep.k = k;
  rep.eps = eps;
  rep.lambda = problem.lambda;
  rep.seed = seed.value;
  rep.constants = config;
  rep.accesses = oracle.access_count() - before;
  rep.access_budget = std::max(rep.access_budget, rep.accesses);
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

StatDimEstimate estimate_statistical_dimension(PsdOracle& oracle, double lambda, const AlgoConfig& config,
                                               Seed seed) {
  if (!(lambda > 0.0)) throw ValidationError("estimate_statistical_dimension: lambda must be positive");
  const Index n = oracle.n();
  const std::uint64_t before = oracle.access_count();
  Rng rng(seed, "estimate_statistical_dimension");
  StatDimEstimate out;
  for (Index k = 1; 2 * k < n; k *= 2) {
    const PcpSketch sk = column_pcp(oracle, k, 0.5, config, Seed{rng.split(static_cast<std::uint64_t>(k)).next_u64()});
    const Svd svd = thin_svd(sk.sketch);
    const double next = k < svd.s.size() ? svd.s[k] : 0.0;
    if (next * next <= lambda / 8.0) {
      out.accepted_k = k;
      out.value = static_cast<double>(k) / (4.0 * config.c_ridge);
      out.accesses = oracle.access_count() - before;
      return out;
    }
  }
  out.exhausted = true;
  out.value = static_cast<double>(n);
  out.accesses = oracle.access_count() - before;
  return out;
}

void evaluate_ridge(RunReport& report, const Vector& x, const PsdMatrix& a, const SpectralData& spec,
                    const Vector& y, double lambda, double eps) {
  const double attained = ridge_objective(a.dense(), x, y, lambda);
  const double best = exact_ridge_regression(spec, y, lambda).objective;
  report.plan["objective"] = attained;
  report.plan["optimal_objective"] = best;
  report.ratio = best > 0.0 ? attained / best : (attained <= 1e-12 ? 1.0 : std::numeric_limits<double>::infinity());
  report.bound = (1.0 + eps) * best;
  report.within_bound = attained <= *report.bound + 1e-12 * (1.0 + y.squaredNorm());
}

}  // namespace psdsketch
