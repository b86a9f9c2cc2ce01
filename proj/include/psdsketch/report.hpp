#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "psdsketch/lowrank.hpp"

namespace psdsketch {

// Minimal streaming JSON writer. Numbers use 17 significant digits; NaN and
// infinities are written as null. Keys keep insertion order.
class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& out) : out_(out) {}

  void begin_object();
  void end_object();
  void begin_array();
  void end_array();
  void key(const std::string& k);

  void value(double v);
  void value(std::int64_t v);
  void value(std::uint64_t v);
  void value(int v) { value(static_cast<std::int64_t>(v)); }
  void value(bool v);
  void value(const std::string& v);
  void value(const char* v) { value(std::string(v)); }
  void null();

  template <class T>
  void field(const std::string& k, const T& v) {
    key(k);
    value(v);
  }
  template <class T>
  void field(const std::string& k, const std::optional<T>& v) {
    key(k);
    if (v) value(*v);
    else null();
  }

 private:
  void separator();
  std::ostream& out_;
  std::vector<bool> first_;  // one entry per open container
  bool after_key_ = false;
};

std::string format_double(double v);  // "%.17g", or "null" when not finite
std::string json_escape(const std::string& s);

struct ReportOptions {
  bool include_timing = true;  // false writes wall_ms as null for byte-stable output
};

// Field order: algorithm, n, k, eps, lambda, seed, accesses, access_budget,
// wall_ms, frob_err_sq, spec_err_sq, opt_frob_tail_sq, opt_spec_tail_sq,
// ratio, bound, within_bound, retries, flags, plan, constants.
void write_report_fields(JsonWriter& w, const RunReport& r, const ReportOptions& opts = {});
void write_report_json(const RunReport& r, std::ostream& out, const ReportOptions& opts = {});
void write_report_json(const RunReport& r, const std::filesystem::path& path, const ReportOptions& opts = {});

void write_constants(JsonWriter& w, const AlgoConfig& c);
void write_counterexample_fields(JsonWriter& w, const CounterexampleReport& r);

}  // namespace psdsketch
