#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lagsw/io.hpp"
#include "lagsw_cli/commands.hpp"

namespace lagsw {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lagsw_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path config(const std::string& body) {
    const fs::path path = dir_ / "case.cfg";
    std::ofstream(path) << "output = " << (dir_ / "out").string() << '\n' << body;
    return path;
  }

  int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "lagsw");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    out_.str("");
    err_.str("");
    return cli::run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  static json load(const fs::path& path) {
    std::ifstream in(path);
    return json::parse(in);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(Cli, RunWritesOutputs) {
  const auto cfg = config("cells = 32\nt_end = 0.1\ncadence_steps = 5\nsnapshot_times = 0.05\n");
  ASSERT_EQ(cli({"run", "--config", cfg.string()}), cli::kOk) << err_.str() << out_.str();
  const fs::path out = dir_ / "out";
  EXPECT_TRUE(fs::exists(out / "snapshot_000.txt"));
  const auto summary = load(out / "summary.json");
  EXPECT_EQ(summary["status"], "ok");
  EXPECT_EQ(summary["entropy_invariance"], 0.0);
  EXPECT_LE(summary["volume_drift_relative"].get<double>(), 1e-12);
  std::ifstream csv(out / "diagnostics.csv");
  const auto rows = io::read_csv(csv);
  ASSERT_GE(rows.size(), 3u);
  EXPECT_FALSE(rows.front().has_residuals);
  EXPECT_EQ(rows.front().tau, 0.0);
  EXPECT_EQ(rows.back().tau, 0.1);
  const auto snap = io::read_snapshot(out / "snapshot_000.txt");
  EXPECT_EQ(snap.state.tau, 0.05);
}

TEST_F(Cli, OverridesFromCommandLine) {
  const auto cfg = config("cells = 16\nt_end = 0.02\n");
  const fs::path other = dir_ / "elsewhere";
  ASSERT_EQ(cli({"run", "--config", cfg.string(), "--out", other.string(), "--cadence", "0.01",
                 "--snapshot-times", "0.005,0.01"}),
            cli::kOk);
  EXPECT_TRUE(fs::exists(other / "snapshot_001.txt"));
  std::ifstream csv(other / "diagnostics.csv");
  EXPECT_EQ(io::read_csv(csv).back().tau, 0.02);
}

TEST_F(Cli, HypothesisFailureExitsTwo) {
  const auto cfg = config("dimension = 3\ngamma = 3.5\ncells = 16\nt_end = 0.01\n");
  EXPECT_EQ(cli({"run", "--config", cfg.string()}), cli::kValidationFailure);
  EXPECT_NE((out_.str() + err_.str()).find("gamma out of range"), std::string::npos);
  EXPECT_EQ(load(dir_ / "out" / "summary.json")["status"], "validation_failure");
  EXPECT_EQ(cli({"run", "--config", cfg.string(), "--force"}), cli::kOk) << err_.str();
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(cli({"run", "--config", config("colour = red\n").string()}), cli::kValidationFailure);
  EXPECT_EQ(cli({"run", "--config", config("gamma = 1\n").string()}), cli::kValidationFailure);
  EXPECT_EQ(cli({"run", "--config", (dir_ / "missing.cfg").string()}), cli::kValidationFailure);
  EXPECT_EQ(cli({"bogus"}), cli::kValidationFailure);
}

TEST_F(Cli, SolverFailureExitsThree) {
  // A fixed step far beyond the acoustic bound, still too large after every halving.
  const auto cfg = config("cells = 64\ndt = 100\nt_end = 1000\npreset.a = 5\n");
  const int code = cli({"run", "--config", cfg.string()});
  EXPECT_EQ(code, cli::kSolverFailure) << err_.str() << out_.str();
  EXPECT_EQ(load(dir_ / "out" / "summary.json")["status"], "solver_failure");
}

TEST_F(Cli, VerifyPassesOnDefaults) {
  const auto cfg = config("cells = 32\nverify.levels = 32,64,128\n");
  EXPECT_EQ(cli({"verify", "--config", cfg.string()}), cli::kOk) << out_.str() << err_.str();
  const auto report = load(dir_ / "out" / "verify.json");
  EXPECT_TRUE(report["passed"].get<bool>());
  EXPECT_EQ(report["checks"].size(), cli::verify_check_names().size());
}

TEST_F(Cli, VerifyDetectsWrongDissipationCoefficient) {
  const auto cfg = config(
      "cells = 32\nverify.levels = 32,64,128\ndissipation_kappa = 8\n"
      "verify.checks = energy_residual_refinement\n");
  EXPECT_EQ(cli({"verify", "--config", cfg.string()}), cli::kVerificationFailure) << out_.str();
  EXPECT_NE((out_.str() + err_.str()).find("energy_residual_refinement"), std::string::npos);
}

TEST_F(Cli, ConvergeMeetsContract) {
  const auto cfg = config("converge.agreement_levels = 32,64,128\nconverge.agreement_t_end = 0.25\n");
  EXPECT_EQ(cli({"converge", "--config", cfg.string()}), cli::kOk) << out_.str() << err_.str();
  const auto report = load(dir_ / "out" / "converge.json");
  EXPECT_TRUE(report["contract"]["space_ok"].get<bool>());
  EXPECT_GE(report["mms"]["space_order"]["order"].get<double>(), 1.8);
}

TEST_F(Cli, SweepContinuesPastFailures) {
  const auto cfg = config("cells = 16\nt_end = 0.02\nsweep.gamma = 1.1,1.4,0.9\nworkers = 2\n");
  EXPECT_EQ(cli({"sweep", "--config", cfg.string()}), cli::kValidationFailure);
  std::ifstream rollup(dir_ / "out" / "rollup.csv");
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(rollup, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_NE(lines[1].find(",ok,0"), std::string::npos) << lines[1];
  EXPECT_NE(lines[2].find(",ok,0"), std::string::npos) << lines[2];
  EXPECT_NE(lines[3].find("failed:"), std::string::npos) << lines[3];
}

}  // namespace
}  // namespace lagsw
