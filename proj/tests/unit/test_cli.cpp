#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ulsched_cli/cli.hpp"

namespace fs = std::filesystem;
using ulsched::cli::run_cli;

namespace {

std::string data_path(const std::string& name) {
  return std::string(ULSCHED_TEST_DATA_DIR) + "/" + name;
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ulsched");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ulsched_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::vector<std::string> lines(const std::string& file) const {
    std::ifstream in(dir_ / file);
    std::vector<std::string> v;
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ExamplesExitZero) {
  for (const char* name : {"table3", "table4", "table5", "sec2-objective"}) {
    const Result r = cli({"example", name});
    EXPECT_EQ(r.code, ulsched::cli::kOk) << name << r.err;
    EXPECT_NE(r.out.find("match=1"), std::string::npos) << r.out;
  }
  EXPECT_NE(cli({"example", "table4"}).out.find("Transmitted 1010 / Dropped 420"),
            std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(cli({}).code, ulsched::cli::kUsageError);
  EXPECT_EQ(cli({"example", "table9"}).code, ulsched::cli::kUsageError);
  EXPECT_EQ(cli({"run", "--bogus"}).code, ulsched::cli::kUsageError);
  EXPECT_EQ(cli({"validate"}).code, ulsched::cli::kUsageError);
  EXPECT_EQ(cli({"sweep", "--jobs", "0"}).code, ulsched::cli::kUsageError);
}

TEST_F(CliTest, HelpExitsZero) {
  const Result r = cli({"--help"});
  EXPECT_EQ(r.code, ulsched::cli::kOk);
  EXPECT_NE(r.out.find("sweep"), std::string::npos);
}

TEST_F(CliTest, ConfigErrorsExitOne) {
  const Result bad = cli({"validate", "--config", data_path("bad_threshold.json")});
  EXPECT_EQ(bad.code, ulsched::cli::kConfigError);
  EXPECT_NE(bad.err.find("buffer_threshold"), std::string::npos) << bad.err;
  EXPECT_EQ(cli({"run", "--policy", "edf", "--out", dir_.string()}).code,
            ulsched::cli::kConfigError);
  EXPECT_EQ(cli({"validate", "--config", data_path("missing.json")}).code,
            ulsched::cli::kConfigError);
  EXPECT_FALSE(fs::exists(dir_ / "summary.csv"));
}

TEST_F(CliTest, ValidateReportsPolicy) {
  const Result r = cli({"validate", "--config", data_path("valid_scenario.json")});
  EXPECT_EQ(r.code, ulsched::cli::kOk);
  EXPECT_NE(r.out.find("dafs-pf"), std::string::npos) << r.out;
}

TEST_F(CliTest, RunAppendsSummaryRows) {
  const std::vector<std::string> base = {"run", "--config", data_path("valid_scenario.json"),
                                         "--ttis", "200", "--out", dir_.string()};
  auto with_seed = [&](const char* seed) {
    auto a = base;
    a.insert(a.end(), {"--seed", seed});
    return a;
  };
  const Result a = cli(with_seed("5"));
  ASSERT_EQ(a.code, ulsched::cli::kOk) << a.err;
  EXPECT_NE(a.out.find("seed=5"), std::string::npos) << a.out;
  EXPECT_NE(a.out.find("conserved=1"), std::string::npos);
  ASSERT_EQ(cli(with_seed("6")).code, ulsched::cli::kOk);
  const auto rows = lines("summary.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].rfind("run,policy", 0), 0u);
  EXPECT_NE(rows[1].find(",5,"), std::string::npos);
  EXPECT_NE(rows[2].find(",6,"), std::string::npos);
}

TEST_F(CliTest, SeedOverrideChangesResultAndIsReproducible) {
  auto summary = [&](const char* seed) {
    return cli({"run", "--config", data_path("valid_scenario.json"), "--ttis", "300", "--seed",
                seed, "--out", dir_.string()})
        .out;
  };
  auto tx = [](const std::string& s) {
    const auto p = s.find("tx_bytes=");
    return s.substr(p, s.find(' ', p) - p);
  };
  EXPECT_EQ(tx(summary("21")), tx(summary("21")));
  EXPECT_NE(tx(summary("21")), tx(summary("22")));
}

TEST_F(CliTest, PolicyOverrideAndTrace) {
  const Result r = cli({"run", "--config", data_path("fixture_replay.json"), "--policy", "dham",
                        "--ue-policy", "flip", "--trace", "--out", dir_.string()});
  ASSERT_EQ(r.code, ulsched::cli::kOk) << r.err;
  EXPECT_NE(r.out.find("policy=dham+flip"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("tx_bytes=600"), std::string::npos) << r.out;
  const auto trace = lines("trace_dham+flip_1.csv");
  ASSERT_FALSE(trace.empty());
  EXPECT_EQ(trace[0], "tti,phase,ue,bytes,detail");
}

TEST_F(CliTest, SweepWritesOneRowPerRun) {
  const Result r = cli({"sweep", "--config", data_path("valid_scenario.json"), "--ttis", "100",
                        "--jobs", "2", "--out", dir_.string()});
  ASSERT_EQ(r.code, ulsched::cli::kOk) << r.err;
  EXPECT_NE(r.out.find("runs=12"), std::string::npos) << r.out;
  EXPECT_EQ(lines("sweep.csv").size(), 13u);
}

TEST_F(CliTest, EnvironmentStandsInForFlags) {
  ::setenv("ULSCHED_TTIS", "50", 1);
  const Result r = cli({"run", "--config", data_path("valid_scenario.json"), "--out",
                        dir_.string()});
  ::unsetenv("ULSCHED_TTIS");
  ASSERT_EQ(r.code, ulsched::cli::kOk) << r.err;
  EXPECT_NE(r.out.find("ttis=50"), std::string::npos) << r.out;
}
