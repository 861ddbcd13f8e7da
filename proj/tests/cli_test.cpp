#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "evo/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "evo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = evo::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("evo_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SimulateWritesSeriesAndSummary) {
  const auto out = (dir_ / "run").string();
  const Outcome r = run_cli({"simulate", "--n", "16", "--alpha", "1", "--steps", "2000",
                             "--seed", "3", "--seeds", "2", "--sample-every", "10", "--out", out});
  ASSERT_EQ(r.code, evo::kExitOk) << r.err;
  const std::string csv = slurp(fs::path(out) / "series_n16_seed3.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,I,round,S,B,good_swaps,flags");
  EXPECT_TRUE(fs::exists(fs::path(out) / "series_n16_seed4.csv"));
  const auto summary = nlohmann::json::parse(slurp(fs::path(out) / "summary.json"));
  EXPECT_EQ(summary["violations"], 0);
  EXPECT_EQ(summary["seeds"], nlohmann::json::parse("[3, 4]"));
  EXPECT_EQ(summary["runs"].size(), 2u);
}

TEST_F(CliTest, SameArgumentsGiveIdenticalBytes) {
  const auto a = (dir_ / "a").string();
  const auto b = (dir_ / "b").string();
  const std::vector<std::string> base{"simulate", "--n", "24", "--alpha", "2", "--rounds", "4",
                                      "--sorter", "quick_then_insertion", "--seed", "11",
                                      "--sample-every", "5"};
  auto args_a = base, args_b = base;
  args_a.insert(args_a.end(), {"--out", a});
  args_b.insert(args_b.end(), {"--out", b});
  ASSERT_EQ(run_cli(args_a).code, 0);
  ASSERT_EQ(run_cli(args_b).code, 0);
  EXPECT_EQ(slurp(fs::path(a) / "series_n24_seed11.csv"), slurp(fs::path(b) / "series_n24_seed11.csv"));
  auto sa = nlohmann::json::parse(slurp(fs::path(a) / "summary.json"));
  auto sb = nlohmann::json::parse(slurp(fs::path(b) / "summary.json"));
  // Only the output directory differs.
  sa["config"].erase("out");
  sb["config"].erase("out");
  for (auto* s : {&sa, &sb}) {
    for (auto& row : (*s)["runs"]) row.erase("series_csv");
  }
  EXPECT_EQ(sa, sb);
}

TEST_F(CliTest, InstrumentedSimulateAndLemmaChecks) {
  const Outcome sim = run_cli({"simulate", "--n", "12", "--rounds", "3", "--instrument"});
  EXPECT_EQ(sim.code, 0) << sim.err;
  const Outcome lemma = run_cli({"lemma-checks", "--n", "10", "--seeds", "2", "--rounds", "3"});
  EXPECT_EQ(lemma.code, 0) << lemma.err;
  EXPECT_NE(lemma.out.find("violations: 0"), std::string::npos);
}

TEST_F(CliTest, SmallPresets) {
  const Outcome bins = run_cli({"balls-bins", "--n", "200", "--trials", "20", "--out",
                                (dir_ / "bins").string()});
  EXPECT_EQ(bins.code, 0) << bins.err;
  EXPECT_TRUE(fs::exists(dir_ / "bins" / "summary.json"));
  const Outcome steady = run_cli({"steady-state", "--n-list", "16,32", "--seeds", "3"});
  EXPECT_EQ(steady.code, 0) << steady.err;
  const Outcome conv = run_cli({"convergence", "--n-list", "16,32", "--seeds", "3", "--beta", "1"});
  EXPECT_EQ(conv.code, 0) << conv.err;
  EXPECT_NE(conv.out.find("beta 1"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, evo::kExitUsage);
  EXPECT_EQ(run_cli({"simulate", "--bogus"}).code, evo::kExitUsage);
  EXPECT_EQ(run_cli({"simulate", "--n", "ten"}).code, evo::kExitUsage);
  EXPECT_EQ(run_cli({"simulate", "--n", "1", "--steps", "5"}).code, evo::kExitUsage);
  EXPECT_EQ(run_cli({"simulate", "--sorter", "bubble"}).code, evo::kExitUsage);
  EXPECT_EQ(run_cli({"lemma-checks", "--alpha", "2", "--n", "8", "--rounds", "1"}).code,
            evo::kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, evo::kExitOk);
}

TEST_F(CliTest, ConfigErrors) {
  EXPECT_EQ(run_cli({"simulate", "--config", (dir_ / "missing.json").string()}).code,
            evo::kExitConfig);
  const auto bad = dir_ / "bad.json";
  std::ofstream(bad) << R"({"n": 8, "shape": "round"})";
  EXPECT_EQ(run_cli({"simulate", "--config", bad.string()}).code, evo::kExitConfig);

  const auto good = dir_ / "good.json";
  std::ofstream(good) << R"({"n": [8, 12], "steps": 500, "seeds": [5]})";
  const Outcome r = run_cli({"simulate", "--config", good.string(), "--alpha", "0"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(CliTest, UnwritableOutput) {
  const auto file = dir_ / "plain_file";
  std::ofstream(file) << "x";
  const Outcome r =
      run_cli({"simulate", "--n", "8", "--steps", "10", "--out", (file / "sub").string()});
  EXPECT_EQ(r.code, evo::kExitOutput);
  EXPECT_FALSE(r.err.empty());
}
