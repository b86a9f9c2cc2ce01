// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.
// Usage: acceptance [path/to/psdsketch [criterion id]]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "psdsketch/exact.hpp"
#include "psdsketch/generators.hpp"
#include "psdsketch/hard_bench.hpp"
#include "psdsketch/linalg.hpp"
#include "psdsketch/lowrank.hpp"
#include "psdsketch/pcp.hpp"
#include "psdsketch/regression.hpp"
#include "psdsketch/ridge_scores.hpp"

using namespace psdsketch;

namespace {

// Pinned tolerances and pass counts.
constexpr double kFrobBound = 1.5;
constexpr double kSpecMult = 1.5;
constexpr double kRidgeBound = 1.5;
constexpr double kSumSlack = 1e-6;
constexpr double kTransferSlack = 1e-8;
constexpr double kScoreLow = 1.0;
constexpr double kScoreHigh = 3.0;
constexpr double kColumnPcpEps = 0.25;
constexpr double kRowPcpEps = 0.5;
constexpr double kDeltaMult = 600.0;
constexpr double kCounterexampleTol = 1e-9;
constexpr double kBaselineBound = 1.0 + 3.0 * 0.5;
constexpr double kScalingSlope = 1.5;
constexpr double kAlg1Rate = 0.8;
constexpr double kStrawmanRate = 0.2;
constexpr double kRunSeconds = 60.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Instance {
  PsdMatrix a;
  SpectralData spec;
};

Instance make(Index n, const Vector& eigenvalues, std::uint64_t seed) {
  PsdMatrix a = gen_spectrum_psd(n, eigenvalues, Seed{seed});
  SpectralData spec = eig_psd(a);
  return {std::move(a), std::move(spec)};
}

Outcome frobenius_guarantee() {
  const Index n = 1024, k = 10;
  const double eps = 0.5;
  const Instance in = make(n, powerlaw_spectrum(n), 1001);
  const double opt = in.spec.frob_tail_sq(k);
  int ok = 0;
  double worst = 0.0, slowest = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    PsdOracle oracle(in.a);
    const auto t0 = std::chrono::steady_clock::now();
    const LowRankResult r = algorithm1_frobenius(oracle, k, eps, AlgoConfig{}, Seed{s});
    slowest = std::max(slowest, seconds_since(t0));
    const double ratio = (in.a.dense() - r.factor.dense()).squaredNorm() / opt;
    worst = std::max(worst, ratio);
    ok += ratio <= kFrobBound ? 1 : 0;
  }
  return {ok >= 18 && slowest < kRunSeconds,
          fmt("%d/20 runs within %.2fx of the optimum (worst %.4f), slowest run %.1f s", ok, kFrobBound, worst,
              slowest)};
}

Outcome spectral_guarantee() {
  const Index n = 1024, k = 8;
  const double eps = 0.5;
  const Instance in = make(n, powerlaw_spectrum(n), 1002);
  const double bound = kSpecMult * in.spec.spec_tail_sq(k) + eps / static_cast<double>(k) * in.spec.frob_tail_sq(k);
  int ok = 0;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    PsdOracle oracle(in.a);
    const LowRankResult r = algorithm2_spectral(oracle, k, eps, AlgoConfig{}, Seed{s});
    const double err = spectral_norm_sq(in.a.dense() - r.factor.dense());
    worst = std::max(worst, err / bound);
    ok += err <= bound ? 1 : 0;
  }
  // Spiked spectrum, k = 1. The regressions that turn the span into a
  // factor sample t = c3 (k log k + k^2/eps) rows, which is 8 at the defaults;
  // their noise leaves a residual near sqrt(1 + n/t). The check runs with
  // c3 = c4 = 100 (t = 200) and also reports the default-constant residual.
  const Index m = 400;
  const PsdMatrix spiked = gen_spectrum_psd(m, spiked_spectrum(m), Seed{1003});
  AlgoConfig wide;
  wide.c3 = 100.0;
  wide.c4 = 100.0;
  double residual = 0.0, residual_default = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    PsdOracle oracle(spiked);
    const LowRankResult r = algorithm2_spectral(oracle, 1, eps, wide, Seed{s + 7});
    residual = std::max(residual, std::sqrt(spectral_norm_sq(spiked.dense() - r.factor.dense())));
    PsdOracle plain(spiked);
    const LowRankResult d = algorithm2_spectral(plain, 1, eps, AlgoConfig{}, Seed{s + 7});
    residual_default = std::max(residual_default, std::sqrt(spectral_norm_sq(spiked.dense() - d.factor.dense())));
  }
  return {ok >= 18 && residual <= 2.0,
          fmt("%d/20 runs within the additive bound (worst err/bound %.4f); spiked residual norm max %.4f <= 2 "
              "over 5 runs at c3=c4=100 (%.4f at default constants)",
              ok, worst, residual, residual_default)};
}

Outcome psd_output_guarantee() {
  const Index n = 512, k = 6;
  const Instance in = make(n, powerlaw_spectrum(n), 1004);
  const double opt = in.spec.frob_tail_sq(k);
  int ok = 0;
  bool structure = true;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    PsdOracle oracle(in.a);
    PsdOutputTrace trace;
    const LowRankResult r = psd_output(oracle, k, 0.5, AlgoConfig{}, Seed{s}, &trace);
    structure = structure && trace.x_eigenvalues.size() <= k && (trace.x_eigenvalues.array() >= 0.0).all();
    const double ratio = (in.a.dense() - r.factor.dense()).squaredNorm() / opt;
    worst = std::max(worst, ratio);
    ok += ratio <= kFrobBound ? 1 : 0;
  }
  return {structure && ok >= 18,
          fmt("kept eigenvalues nonnegative with rank <= k on every run: %s; %d/20 within %.2fx (worst %.4f)",
              structure ? "yes" : "no", ok, kFrobBound, worst)};
}

// Constants for the ridge run: at the defaults every sample size reaches n
// and the solver reads the whole matrix.
AlgoConfig ridge_preset() {
  AlgoConfig c;
  c.c_sample = 0.25;
  c.c1 = 0.05;
  c.c2 = 1.0;
  c.c3 = 0.2;
  c.c4 = 0.2;
  c.c5 = 1.0;
  c.c_rank = 0.25;
  c.c_ridge = 0.25;
  c.failure_delta = 0.1;
  c.oversample_log = false;
  return c;
}

Outcome ridge_guarantee() {
  const Index n = 1024;
  const double lambda = 1e-4;
  const double eps = 0.5;
  const Instance in = make(n, fast_decay_spectrum(n), 1005);
  const double s_lambda = exact_statistical_dimension(in.spec.eigenvalues, lambda);
  const auto quad = static_cast<double>(n) * static_cast<double>(n);
  int ok = 0;
  bool cheap = true;
  double worst = 0.0, most = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(Seed{s}, "ridge-target");
    const Vector y = in.a.dense() * gaussian_matrix(rng, n, 1).col(0) + 0.01 * gaussian_matrix(rng, n, 1).col(0);
    PsdOracle oracle(in.a);
    RidgeProblem problem{oracle, y, lambda, std::ceil(s_lambda)};
    RidgeResult r = sublinear_ridge(problem, eps, ridge_preset(), Seed{s});
    evaluate_ridge(r.report, r.x, in.a, in.spec, y, lambda, eps);
    worst = std::max(worst, *r.report.ratio);
    ok += *r.report.ratio <= kRidgeBound ? 1 : 0;
    const double frac = static_cast<double>(oracle.access_count()) / quad;
    most = std::max(most, frac);
    cheap = cheap && frac < 0.1;
  }
  return {s_lambda <= 20.0 && ok >= 18 && cheap,
          fmt("s_lambda %.3f; %d/20 objectives within %.2fx (worst %.6f); max accesses %.4f n^2", s_lambda, ok,
              kRidgeBound, worst, most)};
}

Outcome exact_score_bounds() {
  int violations = 0, checks = 0;
  double max_sum_excess = -1e300, max_transfer_excess = -1e300;
  for (std::uint64_t m = 0; m < 100; ++m) {
    Rng rng(Seed{m}, "score-bounds");
    const Index n = 12 + static_cast<Index>(rng.below(40));
    Vector ev(n);
    const double decay = 0.25 + 2.75 * rng.uniform();
    for (Index i = 0; i < n; ++i) ev[i] = std::pow(static_cast<double>(i + 1), -decay) * (0.5 + rng.uniform());
    if (m % 5 == 4) ev.tail(n / 3).setZero();
    std::sort(ev.data(), ev.data() + n, std::greater<>());
    const PsdMatrix a = gen_spectrum_psd(n, ev, Seed{m + 5000});
    const Matrix root = matrix_sqrt(eig_psd(a));
    for (Index k : {1, 2, 5, 10}) {
      const RidgeScores of_a = exact_ridge_scores(a.dense(), k);
      const RidgeScores of_root = exact_ridge_scores(root, k);
      const double scale = 2.0 * std::sqrt(static_cast<double>(n) / static_cast<double>(k));
      ++checks;
      const double sum_excess = of_a.scores.sum() - 2.0 * static_cast<double>(k);
      max_sum_excess = std::max(max_sum_excess, sum_excess);
      if (sum_excess > kSumSlack) ++violations;
      const double transfer_excess = (of_a.scores - scale * of_root.scores).maxCoeff();
      max_transfer_excess = std::max(max_transfer_excess, transfer_excess);
      if (transfer_excess > kTransferSlack) ++violations;
    }
  }
  return {violations == 0, fmt("%d violations over %d (matrix, k) pairs; max sum - 2k = %.3g, max transfer excess %.3g",
                               violations, checks, max_sum_excess, max_transfer_excess)};
}

Outcome approximate_scores() {
  const Index ks[] = {1, 2, 3, 5, 8, 10};
  int ok = 0;
  bool diagonal = true;
  double lo = 1e300, hi = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Index n = 400;
    Vector ev;
    switch (s % 3) {
      case 0: ev = powerlaw_spectrum(n); break;
      case 1: ev = fast_decay_spectrum(n); break;
      default: ev = powerlaw_spectrum(n, 0.5); break;
    }
    const Index k = ks[s % 6];
    const Instance in = make(n, ev, 2000 + s);
    const RidgeScores exact = exact_ridge_scores_psd(in.spec, k, 0.5);
    PsdOracle oracle(in.a);
    const RidgeScores approx = approx_sqrt_ridge_scores(oracle, k, AlgoConfig{}, Seed{s});
    const Vector ratio = approx.scores.cwiseQuotient(exact.scores);
    lo = std::min(lo, ratio.minCoeff());
    hi = std::max(hi, ratio.maxCoeff());
    ok += ratio.minCoeff() >= kScoreLow && ratio.maxCoeff() <= kScoreHigh ? 1 : 0;
    for (Index i = 0; i < n; ++i) diagonal = diagonal && oracle.was_read(i, i);
  }
  return {ok >= 18 && diagonal, fmt("%d/20 runs bracket the exact scores in [tau, 3 tau] (ratios %.3f..%.3f); "
                                    "diagonal fully read: %s",
                                    ok, lo, hi, diagonal ? "yes" : "no")};
}

// A small column multiplier keeps the sketch below n columns at n = 256, so
// the negative control shrinks a sketch that is not the whole matrix.
AlgoConfig column_pcp_preset() {
  AlgoConfig c;
  c.c_sample = 0.02;
  c.oversample_log = false;
  return c;
}

Outcome column_pcp_guarantee() {
  const Index n = 256, k = 4;
  const Instance in = make(n, powerlaw_spectrum(n), 1007);
  int ok = 0;
  double worst = 0.0, mean_t = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    PsdOracle oracle(in.a);
    const PcpSketch sk = column_pcp(oracle, k, kColumnPcpEps, column_pcp_preset(), Seed{s});
    mean_t += static_cast<double>(sk.columns.t()) / 100.0;
    const PcpVerification v = verify_pcp(sk, in.a, in.spec, 100, Seed{s + 100});
    worst = std::max(worst, v.worst_distortion);
    ok += v.worst_distortion <= kColumnPcpEps ? 1 : 0;
  }
  int control_exceeds = 0;
  double control_min = 1e300;
  for (std::uint64_t s = 0; s < 5; ++s) {
    PsdOracle oracle(in.a);
    const PcpSketch sk = column_pcp_scaled(oracle, k, kColumnPcpEps, column_pcp_preset(), Seed{s + 900}, 0.01);
    const double d = verify_pcp(sk, in.a, in.spec, 100, Seed{s + 950}).worst_distortion;
    control_min = std::min(control_min, d);
    control_exceeds += d > kColumnPcpEps ? 1 : 0;
  }
  return {ok >= 90 && control_exceeds == 5,
          fmt("%d/100 sketches within %.2f (worst %.4f, mean t %.1f); undersized control exceeded in %d/5 "
              "(smallest %.3f)",
              ok, kColumnPcpEps, worst, mean_t, control_exceeds, control_min)};
}

// At the defaults both row and column samples cover all of n = 512 and the
// sketch is A itself; this keeps them at roughly a third of n.
AlgoConfig row_pcp_preset() {
  AlgoConfig c;
  c.c_sample = 0.08;
  c.oversample_log = false;
  return c;
}

Outcome row_pcp_guarantee() {
  const Index n = 512, k = 4;
  const AlgoConfig c = row_pcp_preset();
  const Instance in = make(n, powerlaw_spectrum(n), 1008);
  const double delta_cap = kDeltaMult * in.spec.frob_tail_sq(k);
  int ok = 0, runs = 0;
  bool delta_ok = true;
  double worst = 0.0, max_delta = 0.0, mean_rows = 0.0;
  bool sampled = true;
  for (RowMode mode : {RowMode::frobenius, RowMode::spectral}) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      PsdOracle oracle(in.a);
      const PcpSketch cols = row_compatible_columns(oracle, k, kRowPcpEps, mode, c, Seed{s});
      const PcpSketch rows = row_pcp(oracle, cols, k, kRowPcpEps, mode, c, Seed{s + 50});
      const PcpVerification v = verify_pcp(rows, in.a, in.spec, 50, Seed{s + 70});
      ++runs;
      sampled = sampled && !cols.columns.exhaustive && !rows.rows->exhaustive;
      mean_rows += static_cast<double>(rows.rows->distinct().size()) / 20.0;
      worst = std::max(worst, v.worst_distortion);
      ok += v.worst_distortion <= kRowPcpEps ? 1 : 0;
      if (mode == RowMode::frobenius) {
        max_delta = std::max(max_delta, std::abs(v.fitted_delta));
        delta_ok = delta_ok && std::abs(v.fitted_delta) <= delta_cap;
      }
    }
  }
  return {ok * 10 >= runs * 9 && delta_ok && sampled,
          fmt("%d/%d runs within %.2f (worst %.4f, mean distinct rows %.1f of %lld); max |delta| %.4g vs cap %.4g",
              ok, runs, kRowPcpEps, worst, mean_rows, static_cast<long long>(n), max_delta, delta_cap)};
}

Outcome counterexample() {
  const Index n = 32, k = 1;
  const double eps = 0.5, alpha = 10.0, beta = 1.0;
  const CounterexampleReport r = counterexample_demo(n, k, eps, alpha, beta);
  const double closed = 1.0 + eps * static_cast<double>(n - k - 1) * alpha * alpha / (beta * beta);
  const double constructed = (1.0 + eps) * static_cast<double>(n - k - 1) * beta * beta;
  const bool equality = std::abs(r.sqrt_err_sq - constructed) <= kCounterexampleTol;
  return {equality && r.ratio >= closed,
          fmt("||A^1/2 - B||_F^2 = %.12g (expected %.12g); projection ratio %.4f vs required %.1f", r.sqrt_err_sq,
              constructed, r.ratio, closed)};
}

// Constants under which algorithm 1 samples fewer than n columns from
// n = 512 upward; used wherever the access count itself is measured.
AlgoConfig scaling_preset() {
  AlgoConfig c;
  c.c_sample = 1.0;
  c.c1 = 1.0;
  c.c2 = 1.0;
  c.c3 = 2.0;
  c.c4 = 2.0;
  c.c5 = 2.0;
  c.c_rank = 2.0;
  c.oversample_log = false;
  return c;
}

Outcome baseline_guarantee() {
  const Index k = 5;
  const double eps = 0.5;
  const Instance in = make(512, powerlaw_spectrum(512), 1010);
  const double opt = in.spec.frob_tail_sq(k);
  int ok = 0;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    PsdOracle oracle(in.a);
    const LowRankResult r = sqrt_route_baseline(oracle, k, eps, Seed{s});
    const double ratio = (in.a.dense() - r.factor.dense()).squaredNorm() / opt;
    worst = std::max(worst, ratio);
    ok += ratio <= kBaselineBound ? 1 : 0;
  }
  std::vector<double> ratios;
  std::string trail;
  for (Index n : {512, 1024, 2048}) {
    const PsdMatrix a = gen_spectrum_psd(n, powerlaw_spectrum(n), Seed{static_cast<std::uint64_t>(3000 + n)});
    PsdOracle base_oracle(a);
    sqrt_route_baseline(base_oracle, k, eps, Seed{1}, scaling_preset());
    PsdOracle alg_oracle(a);
    algorithm1_frobenius(alg_oracle, k, eps, scaling_preset(), Seed{1});
    ratios.push_back(static_cast<double>(base_oracle.access_count()) /
                     static_cast<double>(alg_oracle.access_count()));
    trail += fmt(" n=%lld:%.3f", static_cast<long long>(n), ratios.back());
  }
  const bool increasing = ratios[0] < ratios[1] && ratios[1] < ratios[2];
  return {ok == 10 && increasing,
          fmt("%d/10 runs within %.1fx (worst %.4f); baseline/algorithm1 accesses%s", ok, kBaselineBound, worst,
              trail.c_str())};
}

Outcome scaling() {
  const Index k = 5;
  const double eps = 1.0;
  std::vector<double> lx, ly, per;
  std::string trail;
  for (Index n : {512, 1024, 2048, 4096}) {
    const PsdMatrix a = gen_spectrum_psd(n, powerlaw_spectrum(n), Seed{static_cast<std::uint64_t>(4000 + n)});
    PsdOracle oracle(a);
    algorithm1_frobenius(oracle, k, eps, scaling_preset(), Seed{2});
    const auto acc = static_cast<double>(oracle.access_count());
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(acc));
    per.push_back(acc / (static_cast<double>(n) * static_cast<double>(n)));
    trail += fmt(" n=%lld:%.0f", static_cast<long long>(n), acc);
  }
  const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4.0;
  const double my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4.0;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  bool decreasing = true;
  for (std::size_t i = 1; i < per.size(); ++i) decreasing = decreasing && per[i] < per[i - 1];
  return {slope <= kScalingSlope && decreasing,
          fmt("log-log slope %.3f (max %.1f); accesses/n^2 strictly decreasing: %s; accesses%s", slope,
              kScalingSlope, decreasing ? "yes" : "no", trail.c_str())};
}

Outcome hard_instances() {
  const HardInstanceSpec spec{1024, 4, 0.5, HardVariant::gamma_b, Seed{}};
  const auto rows = run_budget_experiment(spec, {BenchAlgorithm::algorithm1, BenchAlgorithm::strawman},
                                          {kMatchedBudget}, 25, Seed{12}, AlgoConfig{});
  int alg_hits = 0, alg_runs = 0, straw_hits = 0, straw_runs = 0;
  for (const auto& r : rows) {
    if (r.algorithm == "algorithm1") {
      alg_hits += r.success ? 1 : 0;
      ++alg_runs;
    } else {
      straw_hits += r.success ? 1 : 0;
      ++straw_runs;
    }
  }
  const double alg_rate = static_cast<double>(alg_hits) / alg_runs;
  const double straw_rate = static_cast<double>(straw_hits) / straw_runs;
  return {alg_rate >= kAlg1Rate && straw_rate <= kStrawmanRate,
          fmt("algorithm1 success %d/%d (need >= %.0f%%), strawman at matched budget %d/%d (need <= %.0f%%)", alg_hits,
              alg_runs, 100.0 * kAlg1Rate, straw_hits, straw_runs, 100.0 * kStrawmanRate)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run(const std::string& cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); }

Outcome determinism(const std::string& cli) {
  const PsdMatrix a = gen_spectrum_psd(64, powerlaw_spectrum(64), Seed{13});
  std::stringstream buf;
  write_psdm(a, buf);
  const bool round_trip = read_psdm(buf) == a;
  if (cli.empty()) return {false, "no CLI path given"};

  const auto dir = std::filesystem::temp_directory_path() / fmt("psdsketch-acceptance-%d", static_cast<int>(::getpid()));
  std::filesystem::create_directories(dir);
  bool identical = true;
  bool ran = true;
  std::string mismatched;
  std::vector<std::string> names;
  for (int pass = 0; pass < 2; ++pass) {
    const std::string p = (dir / fmt("run%d", pass)).string();
    ran = ran && run(cli + " gen --kind powerlaw --n 200 --seed 5 --no-timing --out " + p + ".psdm --report " + p +
                     "-gen.json") == 0;
    ran = ran && run(cli + " approx --in " + p + ".psdm --k 4 --eps 0.5 --seed 9 --no-timing --out " + p +
                     ".lrkf --report " + p + "-approx.json") == 0;
  }
  for (const char* ext : {".psdm", "-gen.json", ".lrkf", "-approx.json"}) {
    const std::string first = slurp(dir / (std::string("run0") + ext));
    const std::string second = slurp(dir / (std::string("run1") + ext));
    if (first.empty() || first != second) {
      identical = false;
      mismatched += std::string(" ") + ext;
    }
  }
  bool file_round_trip = false;
  if (ran) {
    const PsdMatrix loaded = read_psdm(dir / "run0.psdm");
    const std::filesystem::path copy = dir / "copy.psdm";
    write_psdm(loaded, copy);
    file_round_trip = read_psdm(copy) == loaded && slurp(copy) == slurp(dir / "run0.psdm");
  }
  std::filesystem::remove_all(dir);
  return {round_trip && ran && identical && file_round_trip,
          fmt("CLI runs succeeded: %s; outputs byte-identical: %s%s; PSDM round trip bit-exact: %s",
              ran ? "yes" : "no", identical ? "yes" : "no", mismatched.c_str(),
              round_trip && file_round_trip ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria{
      {1, "frobenius low-rank approximation", frobenius_guarantee},
      {2, "spectral low-rank approximation", spectral_guarantee},
      {3, "psd output", psd_output_guarantee},
      {4, "ridge regression", ridge_guarantee},
      {5, "exact ridge score bounds", exact_score_bounds},
      {6, "approximate sqrt ridge scores", approximate_scores},
      {7, "column pcp", column_pcp_guarantee},
      {8, "row pcp", row_pcp_guarantee},
      {9, "counterexample for the sqrt route", counterexample},
      {10, "sqrt-route baseline", baseline_guarantee},
      {11, "sublinear access scaling", scaling},
      {12, "hard instances at matched budget", hard_instances},
      {13, "determinism and formats", [&] { return determinism(cli); }},
  };
  const int only = argc > 2 ? std::atoi(argv[2]) : 0;
  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail
              << fmt(" [%.1f s]", seconds_since(t0)) << std::endl;
  }
  std::cout << (ran - failed) << "/" << ran << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
