// Copyright 2026 The Crowdelo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "json.hpp"

namespace crowdelo::cli {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;
using ::testing::StartsWith;

const fs::path kData = CROWDELO_TEST_DATA_DIR;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result RunCli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("crowdelo_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path Write(const std::string& name, const std::string& contents) {
    const fs::path path = dir_ / name;
    std::ofstream(path) << contents;
    return path;
  }

  // A three-rater crowd over six items with one rater answering at random.
  fs::path Crowd() {
    std::string csv = "item_a,item_b,outcome,rater_id\n";
    const char* items[] = {"a", "b", "c", "d", "e", "f"};
    for (int rep = 0; rep < 4; ++rep) {
      for (int i = 0; i < 6; ++i) {
        for (int j = i + 1; j < 6; ++j) {
          const std::string pair =
              std::string(items[i]) + "," + items[j] + ",";
          csv += pair + "1.0,r1\n";
          csv += pair + "1.0,r2\n";
          csv += pair + ((i + j + rep) % 2 ? "1.0" : "0.0") + ",r3\n";
        }
      }
    }
    return Write("crowd.csv", csv);
  }

  fs::path dir_;
};

TEST_F(CliTest, RateReproducesChessReplay) {
  const Result r = RunCli({"rate", "--input", (kData / "listing1.csv").string(),
                           "--preset", "chess"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, StartsWith("item,rating,rank,label_sign,label_median\n"));
  EXPECT_THAT(r.out, HasSubstr("p1,1428.3358360702414,0,"));
  EXPECT_THAT(r.out, HasSubstr("p2,1371.6641639297586,1,"));
  // Sign labels on a 1400-based scale are not meaningful.
  EXPECT_THAT(r.err, HasSubstr("warning"));
}

TEST_F(CliTest, RateIsDeterministic) {
  const fs::path crowd = Crowd();
  const Result a = RunCli({"rate", "--input", crowd.string(), "--seed", "3"});
  const Result b = RunCli({"rate", "--input", crowd.string(), "--seed", "3"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(a.err.empty());
}

TEST_F(CliTest, RateJsonToFile) {
  const fs::path output = dir_ / "ratings.json";
  const Result r = RunCli({"rate", "--input", (kData / "listing1.csv").string(),
                           "--format", "json", "--output", output.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  const nlohmann::json rows = nlohmann::json::parse(ReadFile(output));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0]["item"], "p1");
  EXPECT_EQ(rows[0]["rank"], 0);
  EXPECT_EQ(rows[0]["label_median"], 1);
}

TEST_F(CliTest, InputErrors) {
  Result r = RunCli({"rate", "--input", (dir_ / "missing.csv").string()});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_THAT(r.err, HasSubstr("does not exist"));
  const fs::path bad =
      Write("bad.csv", "item_a,item_b,outcome,rater_id\na,b,2,r\n");
  r = RunCli({"rate", "--input", bad.string()});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_THAT(r.err, HasSubstr("line 2"));
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(RunCli({}).code, kExitUsage);
  EXPECT_EQ(RunCli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"rate"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"rate", "--input", "x.csv", "--format", "xml"}).code,
            kExitUsage);
  EXPECT_EQ(RunCli({"rate", "--input", "x.csv", "--k", "-1"}).code,
            kExitUsage);
}

TEST_F(CliTest, HelpExitsCleanly) {
  const Result r = RunCli({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_THAT(r.out, HasSubstr("simulate"));
  EXPECT_THAT(r.out, HasSubstr("spam-audit"));
}

TEST_F(CliTest, SimulateSweep) {
  const Result r = RunCli({"simulate", "--n-items", "32", "--n-raters", "10",
                           "--runs", "3", "--ratios", "1",
                           "--sweep", "comparison_ambiguity=0,0.5,1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_THAT(rows[0], StartsWith("parameter,value,ratio,n_comparisons,"));
  EXPECT_THAT(rows[1], StartsWith("comparison_ambiguity,0,1,96,3,"));
  EXPECT_THAT(rows[3], StartsWith("comparison_ambiguity,1,1,96,3,"));
}

TEST_F(CliTest, SimulateIsDeterministic) {
  const std::vector<std::string> args = {
      "simulate", "--n-items", "32", "--n-raters", "10", "--runs", "3",
      "--ratios", "1,2", "--bias", "--seed", "9", "--format", "json"};
  const Result a = RunCli(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(RunCli(args).out, a.out);
  const nlohmann::json rows = nlohmann::json::parse(a.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0]["parameter"], "none");
  EXPECT_TRUE(rows[0]["value"].is_null());
  EXPECT_EQ(rows[1]["n_comparisons"], 192);
  EXPECT_TRUE(rows[1]["bias_comparison"].is_number());
}

TEST_F(CliTest, SimulateRejectsBadRequests) {
  Result r = RunCli({"simulate", "--runs", "1"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_THAT(r.err, HasSubstr("standard error"));
  r = RunCli({"simulate", "--sweep", "colour=1,2"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_THAT(r.err, HasSubstr("spam_fraction"));
  EXPECT_EQ(RunCli({"simulate", "--votes-per-item", "2", "--runs", "2"}).code,
            kExitUsage);
}

TEST_F(CliTest, ScalingOnInputReachesTheBenchmark) {
  const fs::path out = dir_ / "scaling";
  const Result r =
      RunCli({"scaling", "--input", Crowd().string(), "--counts", "10,40",
              "--replicates", "5", "--output", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string table = ReadFile(out / "trajectories.csv");
  EXPECT_THAT(table, StartsWith("N,n_comparisons,rescaled_x,mean_f1,sem,"));
  // The full record count replays the benchmark itself.
  EXPECT_THAT(table, HasSubstr("\n6,180,"));
  EXPECT_THAT(table, HasSubstr(",1,0,5\n"));
  EXPECT_FALSE(fs::exists(out / "collapse.csv"));
}

TEST_F(CliTest, ScalingSimulatedWithBudget) {
  const fs::path out = dir_ / "scaling";
  const Result r = RunCli(
      {"scaling", "--simulate", "--sizes", "16,24", "--n-raters", "10",
       "--grid", "0.5,1,2,4", "--replicates", "4", "--target-f1", "0.5",
       "--target-n", "100", "--format", "json", "--output", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto collapse = nlohmann::json::parse(ReadFile(out / "collapse.json"));
  ASSERT_EQ(collapse.size(), 3u);
  int best = 0;
  for (const auto& row : collapse) best += row["best"].get<int>();
  EXPECT_EQ(best, 1);
  const auto budget = nlohmann::json::parse(ReadFile(out / "budget.json"));
  ASSERT_EQ(budget.size(), 1u);
  EXPECT_EQ(budget[0]["pilot_n"], 24);
  EXPECT_GT(budget[0]["n_comparisons"].get<int>(), 0);
}

TEST_F(CliTest, ScalingErrors) {
  const std::string out = (dir_ / "scaling").string();
  const std::string crowd = Crowd().string();
  EXPECT_EQ(RunCli({"scaling", "--input", crowd, "--target-f1", "1.1",
                    "--target-n", "100", "--output", out})
                .code,
            kExitUsage);
  EXPECT_EQ(RunCli({"scaling", "--input", crowd}).code, kExitUsage);
  EXPECT_EQ(RunCli({"scaling", "--output", out}).code, kExitUsage);
  EXPECT_EQ(RunCli({"scaling", "--input", crowd, "--sizes", "7",
                    "--output", out})
                .code,
            kExitUsage);
  // Input mode always ends at the full record count, where f1 is 1.
  const Result r = RunCli({"scaling", "--input", crowd, "--counts", "5",
                           "--replicates", "5", "--target-f1", "1",
                           "--target-n", "100", "--output", out});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const Result never = RunCli({"scaling", "--simulate", "--sizes", "16",
                               "--n-raters", "10", "--grid", "0.1,0.2",
                               "--replicates", "3", "--target-f1", "1",
                               "--target-n", "100", "--output", out});
  EXPECT_EQ(never.code, kExitFailure);
  EXPECT_THAT(never.err, HasSubstr("never reaches"));
}

TEST_F(CliTest, SpamAuditFlagsTheRandomRater) {
  const Result r = RunCli({"spam-audit", "--input", Crowd().string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, StartsWith("rater_id,n_comparisons,outcome_correlation,"
                                "median_selection_probability,flags\n"));
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    if (line.starts_with("r3,")) {
      EXPECT_THAT(line, HasSubstr("low_correlation"));
    } else {
      EXPECT_THAT(line, ::testing::EndsWith(","));
    }
  }
  const Result sparse =
      RunCli({"spam-audit", "--input", Crowd().string(), "--min-records",
              "100"});
  EXPECT_THAT(sparse.out, HasSubstr("insufficient_data"));
  EXPECT_EQ(RunCli({"spam-audit", "--input", Crowd().string(),
                    "--probability-floor", "2"})
                .code,
            kExitUsage);
}

TEST_F(CliTest, AnchorPlacesProbesOnTheBenchmark) {
  const fs::path baseline = Write("baseline.csv",
                                  "item_a,item_b,outcome,rater_id\n"
                                  "x1,x2,1.0,r\nx2,x3,1.0,r\nx1,x3,1.0,r\n");
  const fs::path benchmark = Write("benchmark.csv",
                                   "item_a,item_b,outcome,rater_id\n"
                                   "b1,b2,1.0,r\nb2,b3,1.0,r\nb1,b3,1.0,r\n");
  // x2 is the probe: above b3 only.
  const fs::path probes = Write("probes.csv",
                                "item_a,item_b,outcome,rater_id\n"
                                "x2,b1,0.0,r\nb2,x2,1.0,r\nx2,b3,1.0,r\n");
  const std::vector<std::string> args = {
      "anchor", "--baseline", baseline.string(), "--benchmark",
      benchmark.string(), "--probes", probes.string(), "--probes-per-bucket",
      "1", "--format", "json"};
  const Result r = RunCli(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const nlohmann::json rows = nlohmann::json::parse(r.out);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) {
    EXPECT_DOUBLE_EQ(row["anchored_rating"].get<double>(),
                     row["rating"].get<double>() + row["offset"].get<double>());
    if (row["item"] == "x2") {
      EXPECT_EQ(row["probe_position"], 1);
    } else {
      EXPECT_TRUE(row["probe_position"].is_null());
    }
  }
  const fs::path partial = Write("partial.csv",
                                 "item_a,item_b,outcome,rater_id\n"
                                 "x2,b3,1.0,r\n");
  std::vector<std::string> missing = args;
  missing[6] = partial.string();
  const Result failure = RunCli(missing);
  EXPECT_EQ(failure.code, kExitFailure);
  EXPECT_THAT(failure.err, HasSubstr("no recorded comparison"));
}

TEST_F(CliTest, InstalledBinaryMatchesInProcessRun) {
  const fs::path listing = kData / "listing1.csv";
  const fs::path out = dir_ / "stdout.txt";
  const std::string command = std::string(CROWDELO_CLI_PATH) +
                              " rate --preset chess --input " +
                              listing.string() + " > " + out.string() +
                              " 2>/dev/null";
  const int status = std::system(command.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_EQ(ReadFile(out),
            RunCli({"rate", "--preset", "chess", "--input", listing.string()})
                .out);
  const int usage = std::system(
      (std::string(CROWDELO_CLI_PATH) + " simulate --runs 1 2>/dev/null")
          .c_str());
  EXPECT_EQ(WEXITSTATUS(usage), kExitUsage);
}

}  // namespace
}  // namespace crowdelo::cli
