// Copyright 2026 The kldist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "kldist/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kldist/report_io.hpp"

namespace kldist {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("kldist_test_" + name)).string();
}

std::string Slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TEST(Cli, EstimateExample) {
  const Result r = Invoke({"estimate", "--spec", "laplace", "--counts", "2,1,0"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_EQ(r.out, "class,probability\n0,0.5\n1,0.333333333333\n2,0.166666666667\n");
}

TEST(Cli, ProfileExample) {
  const Result r = Invoke({"profile", "--dist", "[0.5,0.3,0.2]", "--n", "10"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("\ns_n,3\n"), std::string::npos) << r.out;
}

TEST(Cli, OracleExample) {
  const std::string json = TempPath("oracle.json");
  const Result r = Invoke({"oracle", "--dist", "[0.5,0.5]", "--n", "2", "--spec", "laplace", "--json", json});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("verdict,holds"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("bound_rhs,0.287682072452"), std::string::npos) << r.out;
  const auto doc = nlohmann::json::parse(Slurp(json));
  EXPECT_LE(doc["expected_kl"].get<double>(), 0.287682);
  std::remove(json.c_str());
}

TEST(Cli, ShorthandDistribution) {
  const Result a = Invoke({"profile", "--kind", "geometric", "--d", "3", "--rate", "0.693147180559945", "--n", "1"});
  EXPECT_EQ(a.code, cli::kExitOk) << a.err;
  const Result b = Invoke({"profile", "--dist", "{\"kind\":\"geometric\",\"d\":3,\"rate\":0.693147180559945}", "--n", "1"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ErrorsExitTwoWithDistinctMessages) {
  const Result unknown = Invoke({"tail", "--bogus", "1"});
  EXPECT_EQ(unknown.code, cli::kExitError);
  const Result no_cmd = Invoke({});
  EXPECT_EQ(no_cmd.code, cli::kExitError);
  const Result json = Invoke({"profile", "--dist", "[0.5,", "--n", "3"});
  EXPECT_EQ(json.code, cli::kExitError);
  EXPECT_NE(json.err.find("malformed JSON"), std::string::npos) << json.err;
  const Result cap = Invoke({"oracle", "--kind", "uniform", "--d", "10", "--n", "100", "--cap", "1000"});
  EXPECT_EQ(cap.code, cli::kExitError);
  EXPECT_NE(cap.err.find("cap exceeded"), std::string::npos) << cap.err;
  const Result bad_spec = Invoke({"estimate", "--spec", "nope", "--counts", "1,2"});
  EXPECT_EQ(bad_spec.code, cli::kExitError);
  EXPECT_NE(bad_spec.err.find("unknown estimator"), std::string::npos) << bad_spec.err;
  const Result bad_number = Invoke({"tail", "--kind", "uniform", "--d", "5", "--n", "ten"});
  EXPECT_EQ(bad_number.code, cli::kExitError);
  EXPECT_NE(bad_number.err.find("--n"), std::string::npos) << bad_number.err;
  EXPECT_EQ(Invoke({"--help"}).code, cli::kExitOk);
}

TEST(Cli, ViolatedVerdictExitsThree) {
  const Result r = Invoke({"tail", "--kind", "uniform", "--d", "50", "--n", "20", "--spec", "mle",
                        "--bounds", "laplace_whp", "--trials", "200", "--delta", "0.1"});
  EXPECT_EQ(r.code, cli::kExitViolated) << r.out << r.err;
  EXPECT_NE(r.out.find("violated"), std::string::npos);
}

TEST(Cli, DumpConfigReplaysIdentically) {
  const std::string cfg = TempPath("cfg.json");
  const std::vector<std::vector<std::string>> runs = {
      {"tail", "--kind", "geometric", "--d", "30", "--rate", "0.1", "--n", "100", "--trials", "300", "--seed", "7"},
      {"missing", "--dist", "[0.4,0.3,0.2,0.1]", "--n", "40", "--trials", "300", "--delta", "0.01"},
      {"expect", "--kind", "uniform", "--d", "8", "--n", "30", "--spec", "adaptive", "--trials", "300"},
      {"lower", "--n", "4000", "--d", "4000", "--delta", "e^-17"},
      {"regime", "--kind", "uniform", "--d", "5", "--n-grid", "10,20", "--delta-grid", "0.1,0.01", "--trials", "100"},
  };
  for (std::vector<std::string> args : runs) {
    std::vector<std::string> dumping = args;
    dumping.push_back("--dump-config");
    dumping.push_back(cfg);
    const Result first = Invoke(dumping);
    ASSERT_NE(first.code, cli::kExitError) << first.err;
    const Result replay = Invoke({args[0], "--config", cfg});
    EXPECT_EQ(replay.code, first.code);
    EXPECT_EQ(replay.out, first.out) << args[0];
  }
  // Flags override the file.
  Invoke({"tail", "--kind", "uniform", "--d", "5", "--n", "50", "--trials", "100", "--dump-config", cfg});
  const Result overridden = Invoke({"tail", "--config", cfg, "--n", "60"});
  EXPECT_NE(overridden.out.find(",60,5,"), std::string::npos) << overridden.out;
  // A config written for one command is rejected by another.
  EXPECT_EQ(Invoke({"expect", "--config", cfg}).code, cli::kExitError);
  std::remove(cfg.c_str());
}

TEST(Cli, WorkersDoNotChangeOutput) {
  const std::vector<std::string> base = {"tail", "--kind", "polynomial", "--d", "40", "--alpha", "1.5",
                                         "--n", "80", "--spec", "adaptive", "--trials", "2000", "--seed", "3"};
  std::vector<std::string> one = base;
  one.insert(one.end(), {"--workers", "1"});
  std::vector<std::string> four = base;
  four.insert(four.end(), {"--workers", "4"});
  EXPECT_EQ(Invoke(one).out, Invoke(four).out);
}

TEST(Cli, OutputFiles) {
  const std::string csv = TempPath("out.csv");
  const std::string json = TempPath("out.json");
  const Result r = Invoke({"tail", "--kind", "uniform", "--d", "5", "--n", "50", "--trials", "100",
                        "--out", csv, "--json", json});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(Slurp(csv).rfind(tail_csv_header(), 0), 0u);
  const auto doc = nlohmann::json::parse(Slurp(json));
  EXPECT_TRUE(doc.is_object());
  std::remove(csv.c_str());
  std::remove(json.c_str());
}

TEST(ReportIo, HeaderIsStable) {
  EXPECT_EQ(tail_csv_header(),
            "bound,statistic,n,d,spec,delta,trials,seed,multiplier,quantile_order,"
            "empirical_quantile,ci_low,ci_high,bound_rhs,envelope,exceedances,"
            "exceedance_rate,exceedance_ci_low,exceedance_ci_high,verdict,warnings\n");
}

TEST(ReportIo, CsvFieldQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

}  // namespace
}  // namespace kldist
