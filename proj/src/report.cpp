#include "psdsketch/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "psdsketch/errors.hpp"

namespace psdsketch {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(static_cast<unsigned char>(c)));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void JsonWriter::separator() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!first_.empty()) {
    if (!first_.back()) out_ << ',';
    first_.back() = false;
  }
}

void JsonWriter::begin_object() {
  separator();
  out_ << '{';
  first_.push_back(true);
}

void JsonWriter::end_object() {
  first_.pop_back();
  out_ << '}';
}

void JsonWriter::begin_array() {
  separator();
  out_ << '[';
  first_.push_back(true);
}

void JsonWriter::end_array() {
  first_.pop_back();
  out_ << ']';
}

void JsonWriter::key(const std::string& k) {
  separator();
  out_ << '"' << json_escape(k) << "\":";
  after_key_ = true;
}

void JsonWriter::value(double v) {
  separator();
  out_ << format_double(v);
}

void JsonWriter::value(std::int64_t v) {
  separator();
  out_ << v;
}

void JsonWriter::value(std::uint64_t v) {
  separator();
  out_ << v;
}

void JsonWriter::value(bool v) {
  separator();
  out_ << (v ? "true" : "false");
}

void JsonWriter::value(const std::string& v) {
  separator();
  out_ << '"' << json_escape(v) << '"';
}

void JsonWriter::null() {
  separator();
  out_ << "null";
}

void write_constants(JsonWriter& w, const AlgoConfig& c) {
  w.begin_object();
  w.field("c_rank", c.c_rank);
  w.field("c_prime", c.c_prime);
  w.field("c_sample", c.c_sample);
  w.field("c1", c.c1);
  w.field("c2", c.c2);
  w.field("c3", c.c3);
  w.field("c4", c.c4);
  w.field("c5", c.c5);
  w.field("c_ridge", c.c_ridge);
  w.field("inner_eps", c.inner_eps);
  w.field("oversample_log", c.oversample_log);
  w.field("failure_delta", c.failure_delta);
  w.field("max_retries", c.max_retries);
  w.end_object();
}

void write_report_fields(JsonWriter& w, const RunReport& r, const ReportOptions& opts) {
  w.field("algorithm", r.algorithm);
  w.field("n", static_cast<std::int64_t>(r.n));
  w.field("k", static_cast<std::int64_t>(r.k));
  w.field("eps", r.eps);
  w.field("lambda", r.lambda);
  w.field("seed", r.seed);
  w.field("accesses", r.accesses);
  w.field("access_budget", r.access_budget);
  if (opts.include_timing) w.field("wall_ms", r.wall_ms);
  else {
    w.key("wall_ms");
    w.null();
  }
  w.field("frob_err_sq", r.frob_err_sq);
  w.field("spec_err_sq", r.spec_err_sq);
  w.field("opt_frob_tail_sq", r.opt_frob_tail_sq);
  w.field("opt_spec_tail_sq", r.opt_spec_tail_sq);
  w.field("ratio", r.ratio);
  w.field("bound", r.bound);
  w.field("within_bound", r.within_bound);
  w.field("retries", r.retries);
  w.key("flags");
  w.begin_array();
  for (const auto& f : r.flags) w.value(f);
  w.end_array();
  w.key("plan");
  w.begin_object();
  for (const auto& [name, v] : r.plan) w.field(name, v);
  w.end_object();
  w.key("constants");
  write_constants(w, r.constants);
}

void write_report_json(const RunReport& r, std::ostream& out, const ReportOptions& opts) {
  JsonWriter w(out);
  w.begin_object();
  write_report_fields(w, r, opts);
  w.end_object();
  out << '\n';
}

void write_report_json(const RunReport& r, const std::filesystem::path& path, const ReportOptions& opts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  write_report_json(r, out, opts);
}

void write_counterexample_fields(JsonWriter& w, const CounterexampleReport& r) {
  w.field("n", static_cast<std::int64_t>(r.n));
  w.field("k", static_cast<std::int64_t>(r.k));
  w.field("eps", r.eps);
  w.field("alpha", r.alpha);
  w.field("beta", r.beta);
  w.field("sqrt_err_sq", r.sqrt_err_sq);
  w.field("sqrt_opt_sq", r.sqrt_opt_sq);
  w.field("sqrt_ratio", r.sqrt_ratio);
  w.field("projection_err_sq", r.projection_err_sq);
  w.field("opt_frob_tail_sq", r.opt_frob_tail_sq);
  w.field("ratio", r.ratio);
  w.field("closed_form_bound", r.closed_form_bound);
  w.field("bound_holds", r.bound_holds);
}

}  // namespace psdsketch
