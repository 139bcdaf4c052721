// Copyright 2026 The qorrelate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: exit codes, formats and JSON round trips.

#include <gtest/gtest.h>

#include <qorrelate/cli.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace qorrelate {
namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qorrelate");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("qorrelate_test_" + name)).string();
}

TEST(Cli, NormalFormCriterionOnBellDiagonal) {
  const CliRun r = run_cli({"check-entanglement", "--state", R"({"family":"bell_diagonal","t":[-0.8,-0.8,-0.8]})",
                         "--criterion", "nf-C"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.doc();
  EXPECT_EQ(j["criterion"], "nf_C");
  EXPECT_TRUE(j["detected"].get<bool>());
  EXPECT_NEAR(j["lhs"].get<double>(), 2.4, 1e-10);
}

TEST(Cli, InvalidBellDiagonalStateIsRejected) {
  const CliRun r = run_cli({"check-entanglement", "--state", R"({"family":"bell_diagonal","t":[0.8,0.8,0.8]})",
                         "--criterion", "nf-C"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("NotPSD"), std::string::npos);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, WernerBelowOrthogonalMeasurementThreshold) {
  const CliRun r = run_cli({"check-steering", "--state", R"({"family":"werner","p":0.5})", "--measurement-a", "om",
                         "--measurement-b", "om"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(r.doc()["detected"].get<bool>());
  const CliRun above = run_cli({"check-steering", "--state", R"({"family":"werner","p":0.62})"});
  EXPECT_TRUE(above.doc()["detected"].get<bool>());
}

TEST(Cli, DichotomyUncertaintyBound) {
  const CliRun r = run_cli({"uncertainty-bound", "--measurement", R"({"preset":"dichotomy","theta":1.5707963})"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.doc()["value"].get<double>(), 1.0, 1e-6);
  const CliRun n = run_cli({"uncertainty-bound", "--numeric", "--measurement", R"({"preset":"dichotomy","theta":1.0})"});
  EXPECT_NEAR(n.doc()["value"].get<double>(), 1.0 - std::cos(1.0), 1e-8);
  EXPECT_EQ(n.doc()["method"], "numeric_min");
}

TEST(Cli, AllCriteriaReturnsVerdictList) {
  const CliRun r = run_cli({"check-entanglement", "--state", R"({"family":"isotropic","d":3,"eta":0.6})"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json v = r.doc()["verdicts"];
  ASSERT_EQ(v.size(), 5u);
  for (const auto& x : v) {
    const CriterionVerdict back = verdict_from_json(x);
    EXPECT_TRUE(back.detected) << back.criterion;
  }
}

TEST(Cli, SteeringOptions) {
  const std::string w = R"({"family":"werner","p":0.9})";
  const CliRun vec = run_cli({"check-steering", "-s", w, "-c", "gamma", "--xi-vector", "[1,1,1]", "-a", "pauli", "-b",
                           "pauli"});
  ASSERT_EQ(vec.code, 0) << vec.err;
  EXPECT_EQ(vec.doc()["criterion"], "steer_gamma");
  const CliRun opt = run_cli({"check-steering", "-s", w, "-c", "gamma", "--optimize-xi"});
  EXPECT_EQ(opt.code, 0) << opt.err;
  const CliRun bad = run_cli({"check-steering", "-s", w, "-c", "gamma", "--xi", "-1"});
  EXPECT_EQ(bad.code, 2);
  const CliRun nf = run_cli({"check-steering", "-s", w, "-c", "nf", "--orbit-search"});
  EXPECT_EQ(nf.code, 0) << nf.err;
  EXPECT_EQ(nf.doc()["criterion"], "steer_nf");
}

TEST(Cli, ParseErrorsAndHelp) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"basis", "--dim", "2", "--unknown"}).code, 2);
  EXPECT_EQ(run_cli({"basis", "--dim", "two"}).code, 2);
  EXPECT_EQ(run_cli({"basis", "--dim", "1"}).code, 2);
  const CliRun h = run_cli({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("--seed"), std::string::npos);
  EXPECT_NE(h.out.find("[0]"), std::string::npos);
  EXPECT_EQ(run_cli({"scm", "--help"}).code, 0);
  EXPECT_EQ(run_cli({"--eps-psd", "0", "basis", "--dim", "2"}).code, 2);
}

TEST(Cli, NumericalFailureExitCode) {
  // An unreachable convergence threshold makes the normal-form iteration stop
  // at its cap.
  const CliRun r = run_cli({"--eps-conv", "1e-300", "check-entanglement", "--state",
                         R"({"family":"random_hs","d":2,"seed":3})", "--criterion", "nf-C"});
  EXPECT_EQ(r.code, 3) << r.out << r.err;
  EXPECT_NE(r.err.find("NoConvergence"), std::string::npos);
}

TEST(Cli, BasisAndScm) {
  const CliRun b = run_cli({"basis", "--dim", "3", "--structure-constants"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(b.doc()["generators"].size(), 8u);
  EXPECT_FALSE(b.doc()["structure_constants"]["f"].empty());
  const CliRun s = run_cli({"scm", "--dim", "2", "--sic"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_TRUE(s.doc()["sic_check"]["is_sic"].get<bool>());
  EXPECT_NEAR(s.doc()["max_bx_norm"].get<double>(), std::sqrt(1.0 / 3.0), 1e-9);
  const CliRun g = run_cli({"scm", "--dim", "3", "--alpha", "0.5", "--h", "0.2"});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_NEAR(g.doc()["alpha"].get<double>(), 0.5, 1e-12);
}

TEST(Cli, ReconstructRoundTrip) {
  const CliRun r = run_cli({"reconstruct", "-m", "sic", "--state", R"({"family":"random_hs","dims":[3],"seed":4})"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.doc();
  EXPECT_EQ(j["method"], "scm_formula");
  EXPECT_LT(j["max_abs_error"].get<double>(), 1e-10);
  // The emitted state is accepted back.
  const std::string path = temp_path("state.json");
  std::ofstream(path) << j["state"].dump();
  const CliRun again = run_cli({"reconstruct", "-m", R"({"preset":"scm","dim":3,"alpha":1,"h":0})", "--state", path});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(again.doc()["method"], "scm_pinv");
  EXPECT_LT(again.doc()["max_abs_error"].get<double>(), 1e-10);
  std::remove(path.c_str());
  // Data given directly.
  const CliRun d = run_cli({"reconstruct", "-m", "pauli", "--data", "[0,0,1]"});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_NEAR(d.doc()["purity"].get<double>(), 1.0, 1e-12);
}

TEST(Cli, MeasurementRoundTripThroughFile) {
  const CliRun s = run_cli({"scm", "--dim", "2", "--alpha", "1", "--h", "0.5"});
  const std::string path = temp_path("measurement.json");
  std::ofstream(path) << s.doc()["measurement"].dump();
  const CliRun u = run_cli({"uncertainty-bound", "-m", path});
  ASSERT_EQ(u.code, 0) << u.err;
  EXPECT_NEAR(u.doc()["value"].get<double>(), s.doc()["uncertainty_bound"].get<double>(), 1e-12);
  std::remove(path.c_str());
}

TEST(Cli, WitnessKappaOverride) {
  const CliRun w = run_cli({"witness", "-s", R"({"family":"werner","p":0.9})", "-a", "pauli", "-b", "pauli"});
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_NEAR(w.doc()["expectation"].get<double>(), 1.0 - 2.7, 1e-10);
  const CliRun k = run_cli({"witness", "-s", R"({"family":"werner","p":0.9})", "-a", "pauli", "-b", "pauli", "--kappa",
                         "3"});
  EXPECT_NEAR(k.doc()["expectation"].get<double>(), 3.0 - 2.7, 1e-10);
  EXPECT_FALSE(k.doc()["detected"].get<bool>());
  const ComplexMatrix m = matrix_from_json(k.doc()["witness"]);
  EXPECT_EQ(m.rows(), 4);
}

TEST(Cli, FormatsAndOutputFile) {
  const std::string w = R"({"family":"werner","p":0.9})";
  const CliRun csv = run_cli({"--format", "csv", "check-steering", "-s", w, "-c", "all"});
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_EQ(csv.out.rfind("criterion,lhs,bound,margin,detected\n", 0), 0u);
  const CliRun table = run_cli({"check-steering", "-s", w, "--format", "table"});
  EXPECT_NE(table.out.find("steer_C"), std::string::npos);
  const std::string path = temp_path("out.json");
  const CliRun f = run_cli({"-o", path, "uncertainty-bound", "-m", "pauli"});
  EXPECT_EQ(f.code, 0);
  EXPECT_TRUE(f.out.empty());
  std::ifstream in(path);
  EXPECT_NEAR(json::parse(in)["value"].get<double>(), 2.0, 1e-12);
  std::remove(path.c_str());
}

TEST(Cli, ScansDefaultToCsvAndIgnoreThreadCount) {
  const CliRun a = run_cli({"--threads", "1", "scan", "random-steering", "--n", "200", "--xi-points", "5"});
  const CliRun b = run_cli({"--threads", "3", "scan", "random-steering", "--n", "200", "--xi-points", "5"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("xi,detected,fraction,stderr\n", 0), 0u);
  const CliRun iso = run_cli({"scan", "isotropic", "--dims", "2,3", "--format", "json"});
  ASSERT_EQ(iso.code, 0) << iso.err;
  EXPECT_LT(iso.doc()["summary"]["max_abs_diff"].get<double>(), 1e-6);
  const std::string svg = temp_path("h.svg");
  const CliRun h = run_cli({"scan", "horodecki", "--t-points", "3", "--p-points", "3", "--svg", svg});
  ASSERT_EQ(h.code, 0) << h.err;
  EXPECT_TRUE(std::filesystem::exists(svg));
  std::remove(svg.c_str());
  EXPECT_EQ(run_cli({"scan", "werner", "--delta-points", "3"}).code, 0);
  EXPECT_EQ(run_cli({"scan", "ppt-agreement", "--n", "20"}).code, 0);
  EXPECT_EQ(run_cli({"scan", "random-steering", "--n", "10", "--preset", "ci"}).code, 2);
}

}  // namespace
}  // namespace qorrelate
