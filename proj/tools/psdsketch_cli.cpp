#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "psdsketch/errors.hpp"
#include "psdsketch/exact.hpp"
#include "psdsketch/generators.hpp"
#include "psdsketch/hard_bench.hpp"
#include "psdsketch/lowrank.hpp"
#include "psdsketch/matrix.hpp"
#include "psdsketch/oracle.hpp"
#include "psdsketch/pcp.hpp"
#include "psdsketch/regression.hpp"
#include "psdsketch/report.hpp"
#include "psdsketch/ridge_scores.hpp"

using namespace psdsketch;

namespace {

// Exact optima are only computed up to this size.
constexpr Index kMaxExactN = 4096;

struct Options {
  std::string in;
  std::string out;
  std::string report;
  Index n = 256;
  Index k = 8;
  double eps = 0.5;
  std::optional<double> lambda;
  std::uint64_t seed = 0;
  std::string kind = "powerlaw";
  std::vector<Index> ns;
  std::vector<std::string> budget;
  Index repeats = 1;
  std::string y;
  std::string eigs;
  std::string variant = "gamma_b";
  double decay = 1.0;
  double alpha = 10.0;
  double beta = 1.0;
  std::optional<double> s_lambda;
  Index trials = 100;
  bool no_timing = false;
  AlgoConfig config;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--in", o.in, "input matrix (PSDM, or CSV by .csv extension)");
  sub->add_option("--out", o.out, "output path (PSDM, LRKF, vector or CSV depending on subcommand)");
  sub->add_option("--report", o.report, "RunReport JSON path (stdout when omitted)");
  sub->add_option("--n", o.n, "dimension for generated instances");
  sub->add_option("--k", o.k, "target rank");
  sub->add_option("--eps", o.eps, "accuracy parameter in (0, 1]");
  sub->add_option("--lambda", o.lambda, "ridge parameter");
  sub->add_option("--seed", o.seed, "root seed");
  sub->add_option("--kind", o.kind, "generator kind")
      ->check(CLI::IsMember({"powerlaw", "spectrum", "hard", "identity", "counterexample"}));
  sub->add_option("--ns", o.ns, "comma-separated dimensions for scaling")->delimiter(',');
  sub->add_option("--budget", o.budget, "comma-separated access budgets ('matched' = algorithm1's count)")
      ->delimiter(',');
  sub->add_option("--repeats", o.repeats, "repeats per budget");
  sub->add_option("--y", o.y, "right-hand side vector (CSV or binary)");
  sub->add_option("--eigs", o.eigs, "eigenvalue vector for --kind spectrum, or one of fast, spiked");
  sub->add_option("--variant", o.variant, "hard distribution: mu, nu, gamma, gamma_b");
  sub->add_option("--decay", o.decay, "power-law exponent");
  sub->add_option("--alpha", o.alpha, "counterexample alpha");
  sub->add_option("--beta", o.beta, "counterexample beta");
  sub->add_option("--s-lambda", o.s_lambda, "statistical dimension hint for ridge");
  sub->add_option("--trials", o.trials, "random projections per PCP check in verify");
  sub->add_flag("--no-timing", o.no_timing, "write wall_ms as null so reports are byte-stable");

  AlgoConfig& c = o.config;
  sub->add_option("--const-c_rank", c.c_rank);
  sub->add_option("--const-c_prime", c.c_prime);
  sub->add_option("--const-c_sample", c.c_sample);
  sub->add_option("--const-c1", c.c1);
  sub->add_option("--const-c2", c.c2);
  sub->add_option("--const-c3", c.c3);
  sub->add_option("--const-c4", c.c4);
  sub->add_option("--const-c5", c.c5);
  sub->add_option("--const-c_ridge", c.c_ridge);
  sub->add_option("--const-inner_eps", c.inner_eps);
  sub->add_option("--const-oversample_log", c.oversample_log);
  sub->add_option("--const-failure_delta", c.failure_delta);
  sub->add_option("--const-max_retries", c.max_retries);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

PsdMatrix load_matrix(const std::string& path) {
  if (path.empty()) throw ValidationError("--in is required");
  if (ends_with(path, ".csv")) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    return read_csv(in);
  }
  return read_psdm(std::filesystem::path(path));
}

void save_matrix(const PsdMatrix& a, const std::string& path) {
  if (path.empty()) throw ValidationError("--out is required");
  if (ends_with(path, ".csv")) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    write_csv(a, out);
    return;
  }
  write_psdm(a, std::filesystem::path(path));
}

// Writes the JSON object produced by `body` to --report, or stdout.
template <class Body>
void emit_json(const Options& o, Body body) {
  std::ostringstream buf;
  JsonWriter w(buf);
  w.begin_object();
  body(w);
  w.end_object();
  buf << '\n';
  if (o.report.empty()) {
    std::cout << buf.str();
    return;
  }
  std::ofstream out(o.report, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + o.report + " for writing");
  out << buf.str();
}

void emit_report(const Options& o, const RunReport& r) {
  ReportOptions ro;
  ro.include_timing = !o.no_timing;
  emit_json(o, [&](JsonWriter& w) { write_report_fields(w, r, ro); });
}

Vector eigenvalues_for(const Options& o) {
  if (o.eigs.empty() || o.eigs == "fast") return fast_decay_spectrum(o.n);
  if (o.eigs == "spiked") return spiked_spectrum(o.n);
  Vector v = read_vector(std::filesystem::path(o.eigs));
  if (v.size() != o.n) throw ValidationError("--eigs length does not match --n");
  return v;
}

int cmd_gen(const Options& o) {
  RunReport r;
  r.algorithm = "gen:" + o.kind;
  r.n = o.n;
  r.seed = o.seed;
  r.constants = o.config;
  std::optional<CounterexampleReport> cx;
  PsdMatrix a;
  if (o.kind == "powerlaw") {
    a = gen_spectrum_psd(o.n, powerlaw_spectrum(o.n, o.decay), Seed{o.seed});
  } else if (o.kind == "spectrum") {
    a = gen_spectrum_psd(o.n, eigenvalues_for(o), Seed{o.seed});
  } else if (o.kind == "identity") {
    if (o.n < 1) throw ValidationError("--n must be positive");
    a = PsdMatrix(Matrix::Identity(o.n, o.n));
  } else if (o.kind == "hard") {
    HardInstanceSpec spec{o.n, o.k, o.eps, parse_hard_variant(o.variant), Seed{o.seed}};
    const HardInstance inst = gen_hard_instance(spec);
    a = inst.a;
    r.k = o.k;
    r.eps = o.eps;
    r.opt_frob_tail_sq = planted_frob_tail_sq(inst, o.k);
    r.plan["planted_blocks"] = static_cast<double>(inst.planted.size());
    r.plan["planted_size"] = static_cast<double>(inst.planted_size);
  } else {
    const Counterexample c = gen_sqrt_route_counterexample(o.n, o.k, o.eps, o.alpha, o.beta);
    a = c.a;
    r.k = o.k;
    r.eps = o.eps;
    cx = counterexample_demo(o.n, o.k, o.eps, o.alpha, o.beta);
  }
  save_matrix(a, o.out);
  ReportOptions ro;
  ro.include_timing = !o.no_timing;
  emit_json(o, [&](JsonWriter& w) {
    write_report_fields(w, r, ro);
    if (cx) {
      w.key("counterexample");
      w.begin_object();
      write_counterexample_fields(w, *cx);
      w.end_object();
    }
  });
  return 0;
}

template <class Run>
int cmd_lowrank(const Options& o, Run run, ErrorNorm norm, double bound_factor) {
  const PsdMatrix a = load_matrix(o.in);
  PsdOracle oracle(a);
  LowRankResult res = run(oracle);
  if (a.n() <= kMaxExactN) evaluate(res.report, res.factor, a, eig_psd(a), norm, bound_factor);
  if (!o.out.empty()) write_lrkf(res.factor, std::filesystem::path(o.out));
  emit_report(o, res.report);
  return 0;
}

int cmd_ridge(const Options& o) {
  if (!o.lambda) throw ValidationError("--lambda is required for ridge");
  const PsdMatrix a = load_matrix(o.in);
  Vector y;
  if (!o.y.empty()) {
    y = read_vector(std::filesystem::path(o.y));
  } else {
    Rng rng(Seed{o.seed}, "cli-ridge-y");
    y = gaussian_matrix(rng, a.n(), 1).col(0);
  }
  PsdOracle oracle(a);
  RidgeProblem problem{oracle, y, *o.lambda, o.s_lambda};
  RidgeResult res = sublinear_ridge(problem, o.eps, o.config, Seed{o.seed});
  if (a.n() <= kMaxExactN) evaluate_ridge(res.report, res.x, a, eig_psd(a), y, *o.lambda, o.eps);
  if (!o.out.empty()) write_vector(res.x, std::filesystem::path(o.out));
  emit_report(o, res.report);
  return 0;
}

struct Check {
  std::string name;
  double value;
  double limit;
  bool passed;
};

// Invariant suite against exact oracles on the given matrix.
int cmd_verify(const Options& o) {
  const PsdMatrix a = load_matrix(o.in);
  const Index n = a.n();
  if (o.k < 1 || o.k >= n) throw ValidationError("k must satisfy 1 <= k < n");
  const auto start = std::chrono::steady_clock::now();
  std::vector<Check> checks;
  RunReport r;
  r.algorithm = "verify";
  r.n = n;
  r.k = o.k;
  r.eps = o.eps;
  r.seed = o.seed;
  r.constants = o.config;

  PsdOracle oracle(a);
  const RidgeScores approx = approx_sqrt_ridge_scores(oracle, o.k, o.config, Seed{o.seed});
  r.accesses = oracle.access_count();
  std::uint64_t diag_read = 0;
  for (Index i = 0; i < n; ++i) diag_read += oracle.was_read(i, i) ? 1 : 0;
  checks.push_back({"diagonal_read", static_cast<double>(diag_read), static_cast<double>(n),
                    diag_read == static_cast<std::uint64_t>(n)});

  if (n <= kMaxExactN) {
    const SpectralData spec = eig_psd(a);
    r.opt_frob_tail_sq = spec.frob_tail_sq(o.k);
    r.opt_spec_tail_sq = spec.spec_tail_sq(o.k);
    const RidgeScores tau = exact_ridge_scores_psd(spec, o.k, 1.0);
    const RidgeScores tau_sqrt = exact_ridge_scores_psd(spec, o.k, 0.5);
    const double kd = static_cast<double>(o.k);
    checks.push_back({"score_sum", tau.sum, 2.0 * kd + 1e-6, tau.sum <= 2.0 * kd + 1e-6});
    double worst_transfer = -std::numeric_limits<double>::infinity();
    double worst_low = std::numeric_limits<double>::infinity();
    double worst_high = 0.0;
    const double scale = 2.0 * std::sqrt(static_cast<double>(n) / kd);
    for (Index i = 0; i < n; ++i) {
      worst_transfer = std::max(worst_transfer, tau.scores(i) - scale * tau_sqrt.scores(i));
      const double t = std::max(tau_sqrt.scores(i), 1e-300);
      worst_low = std::min(worst_low, approx.scores(i) / t);
      worst_high = std::max(worst_high, approx.scores(i) / t);
    }
    checks.push_back({"score_transfer_excess", worst_transfer, 1e-8, worst_transfer <= 1e-8});
    checks.push_back({"approx_scores_min_ratio", worst_low, 1.0, worst_low >= 1.0});
    checks.push_back({"approx_scores_max_ratio", worst_high, 3.0, worst_high <= 3.0});

    PsdOracle pcp_oracle(a);
    const PcpSketch sk = column_pcp(pcp_oracle, o.k, o.eps, o.config, Seed{o.seed});
    const PcpVerification v = verify_pcp(sk, a, spec, o.trials, Seed{o.seed});
    checks.push_back({"column_pcp_distortion", v.worst_distortion, o.eps, v.worst_distortion <= o.eps});

    PsdOracle alg_oracle(a);
    LowRankResult alg = algorithm1_frobenius(alg_oracle, o.k, o.eps, o.config, Seed{o.seed});
    evaluate(alg.report, alg.factor, a, spec, ErrorNorm::frobenius, 1.0 + o.eps);
    r.frob_err_sq = alg.report.frob_err_sq;
    r.ratio = alg.report.ratio;
    r.bound = alg.report.bound;
    checks.push_back({"algorithm1_ratio", *alg.report.ratio, 1.0 + o.eps, *alg.report.within_bound});
  }
  bool all = true;
  for (const auto& c : checks) all = all && c.passed;
  r.within_bound = all;
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (n > kMaxExactN) r.flags.push_back("exact_checks_skipped");

  ReportOptions ro;
  ro.include_timing = !o.no_timing;
  emit_json(o, [&](JsonWriter& w) {
    write_report_fields(w, r, ro);
    w.key("checks");
    w.begin_array();
    for (const auto& c : checks) {
      w.begin_object();
      w.field("name", c.name);
      w.field("value", c.value);
      w.field("limit", c.limit);
      w.field("passed", c.passed);
      w.end_object();
    }
    w.end_array();
  });
  return 0;
}

std::vector<std::uint64_t> parse_budgets(const std::vector<std::string>& raw) {
  std::vector<std::uint64_t> out;
  for (const auto& s : raw) {
    if (s == "matched") {
      out.push_back(kMatchedBudget);
      continue;
    }
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError("bad --budget entry '" + s + "'");
    }
  }
  if (out.empty()) out.push_back(kMatchedBudget);
  return out;
}

int cmd_bench(const Options& o) {
  HardInstanceSpec spec{o.n, o.k, o.eps, parse_hard_variant(o.variant), Seed{o.seed}};
  const auto budgets = parse_budgets(o.budget);
  const auto start = std::chrono::steady_clock::now();
  const auto rows = run_budget_experiment(spec, {BenchAlgorithm::algorithm1, BenchAlgorithm::strawman},
                                          budgets, o.repeats, Seed{o.seed}, o.config);
  if (o.out.empty()) {
    write_bench_csv(rows, std::cout);
  } else {
    std::ofstream out(o.out, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + o.out + " for writing");
    write_bench_csv(rows, out);
  }
  if (o.report.empty()) return 0;

  RunReport r;
  r.algorithm = "bench";
  r.n = o.n;
  r.k = o.k;
  r.eps = o.eps;
  r.seed = o.seed;
  r.constants = o.config;
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  std::map<std::string, std::pair<int, int>> rates;  // algorithm -> (successes, runs)
  for (const auto& row : rows) {
    auto& [hits, total] = rates[row.algorithm];
    hits += row.success ? 1 : 0;
    ++total;
    r.accesses += row.accesses_used;
  }
  for (const auto& [name, hr] : rates) {
    r.plan["success_rate_" + name] = static_cast<double>(hr.first) / static_cast<double>(hr.second);
  }
  emit_report(o, r);
  return 0;
}

int cmd_scaling(const Options& o) {
  std::vector<Index> ns = o.ns;
  if (ns.empty()) ns = {512, 1024, 2048, 4096};
  struct Row {
    Index n;
    std::uint64_t accesses;
    double wall_ms;
  };
  std::vector<Row> rows;
  for (Index n : ns) {
    const PsdMatrix a = gen_spectrum_psd(n, powerlaw_spectrum(n, o.decay), Seed{o.seed + static_cast<std::uint64_t>(n)});
    PsdOracle oracle(a);
    const LowRankResult res = algorithm1_frobenius(oracle, o.k, o.eps, o.config, Seed{o.seed});
    rows.push_back({n, res.report.accesses, res.report.wall_ms});
  }

  std::ostringstream csv;
  csv << "n,accesses,accesses_per_n2" << (o.no_timing ? "" : ",wall_ms") << '\n';
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  bool decreasing = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double nd = static_cast<double>(rows[i].n);
    const double per = static_cast<double>(rows[i].accesses) / (nd * nd);
    csv << rows[i].n << ',' << rows[i].accesses << ',' << format_double(per);
    if (!o.no_timing) csv << ',' << format_double(rows[i].wall_ms);
    csv << '\n';
    if (i > 0) {
      const double prev = static_cast<double>(rows[i - 1].accesses) /
                          (static_cast<double>(rows[i - 1].n) * static_cast<double>(rows[i - 1].n));
      decreasing = decreasing && per < prev;
    }
    const double x = std::log(nd), y = std::log(static_cast<double>(rows[i].accesses));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(rows.size());
  const double slope = rows.size() >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;

  if (o.out.empty()) std::cout << csv.str();
  else {
    std::ofstream out(o.out, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + o.out + " for writing");
    out << csv.str();
  }
  if (o.report.empty()) return 0;
  RunReport r;
  r.algorithm = "scaling";
  r.k = o.k;
  r.eps = o.eps;
  r.seed = o.seed;
  r.constants = o.config;
  r.plan["loglog_slope"] = slope;
  r.plan["per_n2_decreasing"] = decreasing ? 1.0 : 0.0;
  for (const auto& row : rows) {
    r.accesses += row.accesses;
    r.wall_ms += row.wall_ms;
  }
  emit_report(o, r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sublinear low-rank approximation of PSD matrices"};
  app.require_subcommand(1);
  Options o;
  std::map<std::string, CLI::App*> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"gen", "write a synthetic PSD matrix"},
      {"approx", "rank-k approximation with Frobenius error"},
      {"spectral", "rank-k approximation with spectral error"},
      {"psd-approx", "rank-k approximation that is itself PSD"},
      {"ridge", "ridge regression against a low-rank surrogate"},
      {"baseline", "square-root sampling baseline"},
      {"verify", "check score and sketch bounds against exact values"},
      {"bench", "algorithm 1 vs a uniform-query strawman on hard instances"},
      {"scaling", "access counts of algorithm 1 over a sweep of n"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, o);
    subs[name] = sub;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    o.config.validate();
    const double eps = o.eps;
    const Index k = o.k;
    const Seed seed{o.seed};
    const AlgoConfig& cfg = o.config;
    if (subs["gen"]->parsed()) return cmd_gen(o);
    if (subs["approx"]->parsed()) {
      return cmd_lowrank(
          o, [&](PsdOracle& orc) { return algorithm1_frobenius(orc, k, eps, cfg, seed); }, ErrorNorm::frobenius,
          1.0 + eps);
    }
    if (subs["spectral"]->parsed()) {
      return cmd_lowrank(
          o, [&](PsdOracle& orc) { return algorithm2_spectral(orc, k, eps, cfg, seed); }, ErrorNorm::spectral,
          1.0 + eps);
    }
    if (subs["psd-approx"]->parsed()) {
      return cmd_lowrank(
          o, [&](PsdOracle& orc) { return psd_output(orc, k, eps, cfg, seed); }, ErrorNorm::frobenius, 1.0 + eps);
    }
    if (subs["baseline"]->parsed()) {
      return cmd_lowrank(
          o, [&](PsdOracle& orc) { return sqrt_route_baseline(orc, k, eps, seed, cfg); }, ErrorNorm::frobenius,
          1.0 + 3.0 * eps);
    }
    if (subs["ridge"]->parsed()) return cmd_ridge(o);
    if (subs["verify"]->parsed()) return cmd_verify(o);
    if (subs["bench"]->parsed()) return cmd_bench(o);
    if (subs["scaling"]->parsed()) return cmd_scaling(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
