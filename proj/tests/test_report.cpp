#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "psdsketch/report.hpp"

using namespace psdsketch;
using nlohmann::ordered_json;

namespace {

RunReport sample_report() {
  RunReport r;
  r.algorithm = "algorithm1";
  r.n = 64;
  r.k = 3;
  r.eps = 0.5;
  r.seed = 42;
  r.accesses = 1234;
  r.wall_ms = 7.25;
  r.frob_err_sq = 0.1;
  r.opt_frob_tail_sq = 0.08;
  r.ratio = 1.25;
  r.bound = 0.12;
  r.within_bound = true;
  r.flags = {"exhaustive_t1"};
  r.plan["t1"] = 64;
  r.plan["k1"] = 12;
  return r;
}

ordered_json parse(const RunReport& r, ReportOptions opts = {}) {
  std::ostringstream out;
  write_report_json(r, out, opts);
  return ordered_json::parse(out.str());
}

}  // namespace

TEST(ReportJson, FieldOrder) {
  const ordered_json j = parse(sample_report());
  std::vector<std::string> keys;
  for (const auto& item : j.items()) keys.push_back(item.key());
  const std::vector<std::string> expected{
      "algorithm", "n",           "k",         "eps",          "lambda",           "seed",
      "accesses",  "access_budget", "wall_ms", "frob_err_sq",  "spec_err_sq",      "opt_frob_tail_sq",
      "opt_spec_tail_sq", "ratio", "bound",    "within_bound", "retries",          "flags",
      "plan",      "constants"};
  EXPECT_EQ(keys, expected);
}

TEST(ReportJson, ValuesAndNulls) {
  const ordered_json j = parse(sample_report());
  EXPECT_EQ(j["algorithm"], "algorithm1");
  EXPECT_EQ(j["n"], 64);
  EXPECT_EQ(j["accesses"], 1234);
  EXPECT_TRUE(j["lambda"].is_null());
  EXPECT_TRUE(j["spec_err_sq"].is_null());
  EXPECT_EQ(j["ratio"].get<double>(), 1.25);
  EXPECT_EQ(j["within_bound"], true);
  EXPECT_EQ(j["flags"][0], "exhaustive_t1");
  EXPECT_EQ(j["plan"]["k1"].get<double>(), 12.0);
  EXPECT_EQ(j["constants"]["c_rank"].get<double>(), AlgoConfig{}.c_rank);
  EXPECT_EQ(j["constants"]["oversample_log"], true);
  EXPECT_EQ(j["wall_ms"].get<double>(), 7.25);
}

TEST(ReportJson, NoTimingIsByteStable) {
  RunReport a = sample_report();
  RunReport b = sample_report();
  b.wall_ms = 99.0;
  std::ostringstream oa;
  std::ostringstream ob;
  write_report_json(a, oa, {false});
  write_report_json(b, ob, {false});
  EXPECT_EQ(oa.str(), ob.str());
  EXPECT_TRUE(ordered_json::parse(oa.str())["wall_ms"].is_null());
}

TEST(ReportJson, DoublesRoundTripExactly) {
  RunReport r = sample_report();
  r.ratio = 1.0 / 3.0;
  r.bound = std::numeric_limits<double>::quiet_NaN();
  const ordered_json j = parse(r);
  EXPECT_EQ(j["ratio"].get<double>(), 1.0 / 3.0);
  EXPECT_TRUE(j["bound"].is_null());
}

TEST(JsonWriter, EscapesStrings) {
  std::ostringstream out;
  JsonWriter w(out);
  w.begin_object();
  w.field("s", std::string("a\"b\\c\n\x01"));
  w.end_object();
  EXPECT_EQ(ordered_json::parse(out.str())["s"], "a\"b\\c\n\x01");
}

TEST(JsonWriter, NestedContainers) {
  std::ostringstream out;
  JsonWriter w(out);
  w.begin_array();
  w.begin_object();
  w.field("x", 1);
  w.end_object();
  w.value(2.5);
  w.null();
  w.end_array();
  const ordered_json j = ordered_json::parse(out.str());
  EXPECT_EQ(j.size(), 3u);
  EXPECT_EQ(j[0]["x"], 1);
  EXPECT_TRUE(j[2].is_null());
}

TEST(FormatDouble, NonFiniteIsNull) {
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "null");
  EXPECT_EQ(format_double(0.5), "0.5");
}
