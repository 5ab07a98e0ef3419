#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "cli_support.hpp"
#include "projfeas/io.hpp"

using namespace testing_support;
using nlohmann::json;

namespace {

const char* kDisk = R"({"dimension": 2, "sets": [{"name": "D", "constraints": [{"terms": [
  {"exponents": [2, 0], "coefficient": 1}, {"exponents": [0, 2], "coefficient": 1},
  {"exponents": [0, 0], "coefficient": -1}]}]}]})";

// A ball of radius 2, then the degenerate set {x^2 + y^2 <= 0}; projecting
// (2, 0) onto the second set has no regular KKT point.
const char* kDegenerate = R"({"dimension": 2, "sets": [
  {"name": "B", "constraints": [{"terms": [{"exponents": [2, 0], "coefficient": 1},
    {"exponents": [0, 2], "coefficient": 1}, {"exponents": [0, 0], "coefficient": -4}]}]},
  {"name": "Z", "constraints": [{"terms": [{"exponents": [2, 0], "coefficient": 1},
    {"exponents": [0, 2], "coefficient": 1}]}]}]})";

projfeas::io::TraceFile trace_at(const std::filesystem::path& p) { return projfeas::io::read_trace(p); }

}  // namespace

TEST(CliRun, Example51Converges) {
  const auto out = scratch("run51.csv");
  const auto r = run_cli("run --example ex5.1 --x0 1,1 --sweeps 1000 --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto t = trace_at(out);
  EXPECT_LT(t.rows.back().x.norm(), 0.1);
  EXPECT_EQ(t.rows.front().k, 0u);
}

TEST(CliRun, FeasibleStartGivesOneSweepOfFixedPoints) {
  const auto out = scratch("run51_origin.csv");
  const auto r = run_cli("run --example ex5.1 --x0 0,0 --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto t = trace_at(out);
  EXPECT_EQ(t.rows.back().k, 4u);
  for (const auto& row : t.rows) {
    EXPECT_EQ(row.x.norm(), 0.0);
    EXPECT_EQ(row.step_norm, 0.0);
  }
}

TEST(CliRun, InputErrorsExitOne) {
  const auto out = scratch("bad.csv").string();
  auto r = run_cli("run --example ex5.1 --out " + out);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("--x0"), std::string::npos) << r.out;
  EXPECT_EQ(run_cli("run --example ex5.1 --x0 1,1,1 --out " + out).code, 1);
  EXPECT_EQ(run_cli("run --example ex5.1 --x0 1,x --out " + out).code, 1);
  EXPECT_EQ(run_cli("run --x0 1,1 --out " + out).code, 1);
  EXPECT_EQ(run_cli("run --example nope --x0 1,1 --out " + out).code, 1);
  EXPECT_EQ(run_cli("bogus").code, 1);
  EXPECT_EQ(run_cli("--help").code, 0);
}

TEST(CliRun, MalformedProblemFileReportsPosition) {
  const auto p = scratch("broken.json");
  spit(p, "{\n  \"dimension\": 2,\n  \"sets\": [oops]\n}\n");
  const auto r = run_cli("run --problem " + p.string() + " --x0 1,1 --out " + scratch("x.csv").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("broken.json:3:"), std::string::npos) << r.out;
}

TEST(CliRun, SolverFailureWritesPartialTrace) {
  const auto p = scratch("degenerate.json");
  spit(p, kDegenerate);
  const auto out = scratch("degenerate.csv");
  std::filesystem::path partial = out;
  partial += ".partial";
  std::filesystem::remove(out);
  std::filesystem::remove(partial);
  const auto r = run_cli("run --problem " + p.string() + " --x0 3,0 --out " + out.string());
  EXPECT_EQ(r.code, 2) << r.out;
  ASSERT_TRUE(std::filesystem::exists(partial));
  EXPECT_FALSE(std::filesystem::exists(out));
  const auto t = trace_at(partial);
  EXPECT_EQ(t.rows.size(), 2u);
}

TEST(CliRate, Example55) {
  const auto trace = scratch("run55.csv");
  ASSERT_EQ(run_cli("run --example ex5.5 --x0 0,2 --sweeps 50000 --out " + trace.string()).code, 0);
  const auto report = scratch("rate55.json");
  const auto r = run_cli("rate --trace " + trace.string() + " --d 2 --window 10000:100000 --out " + report.string());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(slurp(report));
  EXPECT_EQ(j["empirical"]["chosen"], "power");
  const double e = j["empirical"]["power"]["exponent"];
  EXPECT_GE(e, -0.52);
  EXPECT_LE(e, -0.48);
  EXPECT_EQ(j["theoretical"]["class"], "power_law");
  EXPECT_EQ(j["theoretical"]["rho"], "1/6");
  EXPECT_EQ(j["verdict"], "CONSISTENT");
}

TEST(CliRate, SyntheticGeometricWithLinearTheory) {
  const auto trace = scratch("geo.csv");
  std::ofstream out(trace);
  out << "# limit=0;radius=0;source=oracle;heuristic=false\nk,set_index,residual_before,step_norm,x_0\n";
  for (int k = 0; k <= 60; ++k) out << k << "," << (k == 0 ? 0 : 1) << ",0,0," << projfeas::io::format_double(std::pow(0.8, k)) << "\n";
  out.close();
  const auto r = run_cli("rate --trace " + trace.string() + " --d 1 --window 1:60");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["empirical"]["chosen"], "geometric");
  EXPECT_EQ(j["theoretical"]["class"], "linear");
  EXPECT_EQ(j["verdict"], "CONSISTENT");
  EXPECT_NEAR(j["empirical"]["geometric"]["ratio"].get<double>(), 0.8, 1e-9);

  EXPECT_EQ(run_cli("rate --trace " + trace.string() + " --d 1 --window 1:5").code, 1);
  EXPECT_EQ(run_cli("rate --trace " + trace.string() + " --d 1 --window 9").code, 1);
  EXPECT_EQ(run_cli("rate --trace /nonexistent.csv --d 1").code, 1);
}

TEST(CliErrorBound, CurveMode) {
  const auto r = run_cli("errorbound --example ex3.2:n=2,d=2 --curve --t-min 0.001 --t-max 0.1 --points 50");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NEAR(json::parse(r.out)["fitted_exponent"].get<double>(), 0.25, 1e-3);
}

TEST(CliErrorBound, SingleSet) {
  const auto p = scratch("disk.json");
  spit(p, kDisk);
  const auto r = run_cli("errorbound --problem " + p.string() + " --center 1,0 --theta 1");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["fitted_tau"].get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(j["best_constant"].get<double>(), 1.0, 1e-9);
  EXPECT_EQ(j["seed"], 0);
  EXPECT_EQ(j["radius"], 0.1);
}

TEST(CliErrorBound, InputErrors) {
  EXPECT_EQ(run_cli("errorbound --example ex5.1 --center 1,1").code, 1);
  EXPECT_EQ(run_cli("errorbound --example ex5.1 --center 0,0 --samples 10").code, 1);
  EXPECT_EQ(run_cli("errorbound --example ex5.1 --center 0,0 --theta -1").code, 1);
}

TEST(CliReplicate, Tables) {
  auto r = run_cli("replicate --id ex5.5");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("alpha_1e6"), std::string::npos);
  r = run_cli("replicate --id ex5.3");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("closed-form match k<=50 <=1e-10"), std::string::npos);
  EXPECT_EQ(run_cli("replicate --id nope").code, 1);
  EXPECT_EQ(run_cli("replicate").code, 1);
}

TEST(CliReplicate, AllCoversSixEntries) {
  const auto r = run_cli("replicate --all");
  ASSERT_EQ(r.code, 0) << r.out;
  for (const char* id : {"ex3.2", "ex5.1", "ex5.3", "ex5.5", "ex5.7", "ex5.8"}) {
    EXPECT_NE(r.out.find("\n" + std::string(id)), std::string::npos) << id;
  }
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(CliDeterminism, RunAndErrorBoundAreByteIdentical) {
  const auto a = scratch("det_a.csv"), b = scratch("det_b.csv");
  ASSERT_EQ(run_cli("run --example ex5.1 --x0 1,1 --sweeps 500 --seed 3 --out " + a.string()).code, 0);
  ASSERT_EQ(run_cli("run --example ex5.1 --x0 1,1 --sweeps 500 --seed 3 --out " + b.string()).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  const auto c = scratch("det_c.json"), d = scratch("det_d.json");
  const std::string eb = "errorbound --example ex5.5 --center 0,0 --theta 2 --seed 7 --out ";
  ASSERT_EQ(run_cli(eb + c.string()).code, 0);
  ASSERT_EQ(run_cli(eb + d.string()).code, 0);
  EXPECT_EQ(slurp(c), slurp(d));
  EXPECT_FALSE(slurp(c).empty());
}
