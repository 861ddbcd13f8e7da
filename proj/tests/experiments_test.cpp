#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "evo/experiments.hpp"

using namespace evo;

namespace {

RoundRecord round_of(std::uint64_t t_s, std::uint64_t t_e, std::int64_t I_ts, bool complete = true) {
  RoundRecord r;
  r.t_s = t_s;
  r.t_e = t_e;
  r.I_ts = I_ts;
  r.complete = complete;
  return r;
}

SeriesRun series_of(int n, std::vector<std::pair<std::uint64_t, std::int64_t>> points) {
  SeriesRun run;
  run.spec.n = n;
  for (auto [t, I] : points) {
    TimeSeriesRecord rec;
    rec.t = t;
    rec.I = I;
    run.result.series.push_back(rec);
  }
  return run;
}

}  // namespace

TEST(ExperimentsTest, GoodSwapFraction) {
  const std::vector<RoundRecord> rounds{round_of(0, 10, 5), round_of(10, 30, 5),
                                        round_of(30, 31, 5, false)};
  const auto f = good_swap_fraction(rounds, {4, 5}, 1);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_DOUBLE_EQ(*f[0], 0.4);
  EXPECT_DOUBLE_EQ(*f[1], 0.25);
  const auto none = good_swap_fraction(rounds, {4, 5}, 0);
  ASSERT_EQ(none.size(), 2u);
  EXPECT_FALSE(none[0]);
}

TEST(ExperimentsTest, RoundLengthLowerBound) {
  const int n = 10;
  const double c = 0.25;  // eligible when I_ts >= (12/16 + 1/2) * 10 = 12.5
  const std::vector<RoundRecord> rounds{round_of(0, 2, 13), round_of(2, 10, 13),
                                        round_of(10, 11, 3), round_of(11, 12, 40, false)};
  const LowerBoundCheck r = round_length_lowerbound_check(rounds, n, c);
  EXPECT_DOUBLE_EQ(r.min_start_inversions, 12.5);
  EXPECT_EQ(r.eligible, 2);
  EXPECT_EQ(r.violations, 1);  // length 2 < 2.5
}

TEST(ExperimentsTest, SteadyStateMediansAndScaling) {
  ExperimentConfig c;
  c.burn_in = 10;
  c.scaling_tolerance = 0.5;
  std::vector<SeriesRun> runs{
      series_of(10, {{0, 1000}, {10, 5}, {20, 7}, {30, 6}}),
      series_of(20, {{10, 12}, {20, 9}}),
      series_of(20, {{5, 999}, {40, 11}}),
  };
  const SteadyStateSummary s = summarize_steady_state(runs, c);
  ASSERT_EQ(s.rows.size(), 2u);
  EXPECT_EQ(s.rows[0].samples, 3u);
  EXPECT_DOUBLE_EQ(s.rows[0].median_I, 6);
  EXPECT_DOUBLE_EQ(s.rows[0].median_ratio, 0.6);
  EXPECT_EQ(s.rows[1].samples, 3u);
  EXPECT_DOUBLE_EQ(s.rows[1].median_I, 11);
  EXPECT_DOUBLE_EQ(s.rows[1].max_I, 12);
  EXPECT_NEAR(s.max_relative_change, (0.6 - 0.55) / 0.6, 1e-12);
  EXPECT_TRUE(s.scaling_ok);

  runs.push_back(series_of(40, {{100, 80}}));
  EXPECT_FALSE(summarize_steady_state(runs, c).scaling_ok);
}

TEST(ExperimentsTest, ConvergenceSummary) {
  std::vector<HittingTime> hits{
      {16, 1, 64}, {16, 2, 128}, {16, 3, std::nullopt}, {64, 1, 384}, {64, 2, 384}};
  const ConvergenceSummary s = summarize_convergence(hits, 2.0);
  ASSERT_EQ(s.rows.size(), 2u);
  EXPECT_EQ(s.censored, 1u);
  EXPECT_EQ(s.rows[0].hits, 2u);
  EXPECT_DOUBLE_EQ(s.rows[0].median_t, 96);
  EXPECT_DOUBLE_EQ(s.rows[0].median_per_nlogn, 1.5);
  EXPECT_DOUBLE_EQ(s.rows[1].median_per_nlogn, 1.0);
  EXPECT_DOUBLE_EQ(s.spread_nlogn, 1.5);
}

TEST(ExperimentsTest, HittingTime) {
  RunSpec spec{32, 0, SorterKind::repeated_insertion, InitPolicy::reversed, 1};
  // Frozen reversed input becomes sorted at the last real swap of the first
  // round, one step before its closing j == 0 guard.
  EXPECT_EQ(hitting_time(spec, 0, 10000), std::optional<std::uint64_t>(32 * 31 / 2 + 31 - 1));
  EXPECT_EQ(hitting_time(spec, 1e9, 10), std::optional<std::uint64_t>(0));
  EXPECT_FALSE(hitting_time(spec, 0, 10));
}

TEST(ExperimentsTest, ConfigRoundTripAndErrors) {
  ExperimentConfig c;
  c.preset = "steady-state";
  c.n_list = {8, 16};
  c.alpha = 2;
  c.sorter = SorterKind::quick_then_insertion;
  c.init = InitPolicy::reversed;
  c.seeds = {3, 4, 5};
  c.steps = 1000;
  c.beta = 1.5;
  const ExperimentConfig back = config_from_json(nlohmann::json::parse(to_json(c).dump()));
  EXPECT_EQ(to_json(back), to_json(c));

  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"colour": 1})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"n": "big"})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse("[1, 2]")), ConfigError);
  const ExperimentConfig single = config_from_json(nlohmann::json::parse(R"({"n": 12, "seed": 9})"));
  EXPECT_EQ(single.n_list, std::vector<int>{12});
  EXPECT_EQ(single.seeds, std::vector<std::uint64_t>{9});

  const auto dir = std::filesystem::temp_directory_path() / "evo_experiments_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "bad.json").string();
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(load_config(path), ConfigError);
  EXPECT_THROW(load_config((dir / "missing.json").string()), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(ExperimentsTest, Validation) {
  ExperimentConfig c;
  EXPECT_NO_THROW(c.validate());
  c.n_list = {1};
  EXPECT_THROW(c.validate(), ConfigError);
  c.n_list = {8};
  c.alpha = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  c.alpha = 1;
  c.ratio_factor = 0.5;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ExperimentsTest, DefaultBudgets) {
  ExperimentConfig c;
  EXPECT_EQ(c.burn_in_for(64), 2u * 64 * 64);
  EXPECT_EQ(c.sample_every_for(64), 64u);
  c.sorter = SorterKind::quick_then_insertion;
  EXPECT_EQ(c.burn_in_for(64), 8u * 64 * 6);
  c.burn_in = 7;
  EXPECT_EQ(c.burn_in_for(64), 7u);
}

TEST(ExperimentsTest, RoundAuditOnFrozenAndMovingInputs) {
  const RoundAudit frozen = audit_rounds({64, 0, SorterKind::repeated_insertion, InitPolicy::reversed, 1},
                                         3, 1u << 20);
  EXPECT_EQ(frozen.rounds, 3u);
  EXPECT_EQ(frozen.identity_violations + frozen.length_violations + frozen.drift_violations, 0u);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RoundAudit a = audit_rounds({48, 1, SorterKind::repeated_insertion, InitPolicy::uniform_random, seed},
                                      5, 1u << 20);
    EXPECT_EQ(a.rounds, 5u);
    EXPECT_EQ(a.identity_violations + a.length_violations + a.drift_violations, 0u)
        << a.first_violation;
    EXPECT_LE(a.max_drift, 47);
  }
}

TEST(ExperimentsTest, LemmaChecksNeedAlphaOne) {
  ExperimentConfig c;
  c.n_list = {8};
  c.seeds = {1, 2};
  c.rounds = 3;
  const LemmaCheckSummary s = lemma_checks(c, Execution::serial);
  EXPECT_EQ(s.runs, 2u);
  EXPECT_EQ(s.stats.hard_violations(), 0u);
  c.alpha = 2;
  EXPECT_THROW(lemma_checks(c, Execution::serial), ConfigError);
}
