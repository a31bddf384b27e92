#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pddlego/error.hpp"
#include "pddlego/harness/harness.hpp"

namespace pddlego::harness {
namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SuiteConfig small_coin(std::uint64_t first, std::uint64_t last) {
  SuiteConfig c;
  c.env = envs::EnvKind::kCoin;
  c.first_seed = first;
  c.last_seed = last;
  return c;
}

TEST(Harness, MomentsUseSampleStddev) {
  const auto m = moments({2, 4, 4, 4, 5, 5, 7, 9});
  EXPECT_DOUBLE_EQ(m.mean, 5.0);
  EXPECT_NEAR(m.stddev, 2.13809, 1e-5);
  EXPECT_TRUE(m.stddev_defined);
  const auto one = moments({3});
  EXPECT_DOUBLE_EQ(one.mean, 3.0);
  EXPECT_DOUBLE_EQ(one.stddev, 0.0);
  EXPECT_FALSE(one.stddev_defined);
}

TEST(Harness, CsvHasOneRowPerEpisode) {
  auto config = small_coin(10, 13);
  config.trials = 2;
  const auto dir = std::filesystem::temp_directory_path() / "pddlego_harness_csv";
  std::filesystem::remove_all(dir);
  config.output_dir = dir.string();
  const auto metrics = run_suite(config);
  ASSERT_EQ(metrics.rows.size(), 8u);
  const auto csv = slurp(dir / "summary.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "seed,trial,strategy,translator,success,steps,invalid_steps,iterations,retries,failure_reason");
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "traces" / "seed13-trial1.jsonl"));
  const auto json = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(json["episodes"].get<int>(), 8);
  EXPECT_EQ(json["per_seed"].size(), 4u);
  std::filesystem::remove_all(dir);
}

TEST(Harness, OutputIndependentOfParallelism) {
  auto config = small_coin(10, 17);
  config.strategy = agent::Strategy::kRandom;
  config.trials = 2;
  const auto serial = to_csv(run_suite(config));
  config.parallelism = 4;
  EXPECT_EQ(to_csv(run_suite(config)), serial);
}

TEST(Harness, CompareSelfIsZeroAndSignFlips) {
  auto oracle = run_suite(small_coin(10, 19));
  auto config = small_coin(10, 19);
  config.strategy = agent::Strategy::kRandom;
  config.step_cap = 400;
  auto random = run_suite(config);
  EXPECT_DOUBLE_EQ(compare(oracle, oracle).efficiency, 0.0);
  const auto ab = compare(oracle, random);
  const auto ba = compare(random, oracle);
  ASSERT_FALSE(ab.common_seeds.empty());
  EXPECT_GT(ab.efficiency, 0.0);
  EXPECT_LT(ba.efficiency, 0.0);
  EXPECT_NE(ab.text().find("efficiency gain"), std::string::npos);
}

TEST(Harness, CompareRejectsMismatchedSuites) {
  const auto a = run_suite(small_coin(10, 11));
  const auto b = run_suite(small_coin(12, 13));
  EXPECT_THROW(compare(a, b), IncomparableSuites);
  auto cooking = small_coin(10, 11);
  cooking.env = envs::EnvKind::kCooking;
  EXPECT_THROW(compare(a, run_suite(cooking)), IncomparableSuites);
}

TEST(Harness, ConfigValidation) {
  auto c = small_coin(5, 4);
  EXPECT_THROW(run_suite(c), PreconditionViolation);
  c = small_coin(1, 1);
  c.trials = 0;
  EXPECT_THROW(c.check(), PreconditionViolation);
  c.trials = 1;
  c.parallelism = 0;
  EXPECT_THROW(c.check(), PreconditionViolation);
  c.parallelism = 1;
  c.translator.kind = "telepathy";
  EXPECT_THROW(c.check(), PreconditionViolation);
}

TEST(Harness, ParsesJsonConfig) {
  const auto j = nlohmann::json::parse(R"({"env": "cooking", "difficulty": "hard", "first_seed": 3,
    "last_seed": 7, "trials": 2, "strategy": "pddl-gen", "step_cap": 90, "parallelism": 3,
    "translator": {"kind": "faulty", "fault_probability": 0.5, "fault_kinds": ["syntax-error"]}})");
  const auto c = parse_suite_config(j);
  EXPECT_EQ(c.env, envs::EnvKind::kCooking);
  EXPECT_EQ(c.difficulty, envs::Difficulty::kHard);
  EXPECT_EQ(c.seeds().size(), 5u);
  EXPECT_EQ(c.strategy, agent::Strategy::kPddlGen);
  EXPECT_EQ(*c.step_cap, 90u);
  EXPECT_EQ(c.translator.kind, "faulty");
  ASSERT_EQ(c.translator.fault.kinds.size(), 1u);
  EXPECT_EQ(c.translator.fault.kinds[0], translator::FaultKind::kSyntaxError);
  EXPECT_NO_THROW(c.check());
}

TEST(Harness, FaultyTranslatorFailuresAreRowsNotCrashes) {
  auto config = small_coin(10, 12);
  config.translator.kind = "faulty";
  config.translator.fault.probability = 1.0;
  config.translator.fault.kinds = {translator::FaultKind::kSyntaxError};
  const auto metrics = run_suite(config);
  ASSERT_EQ(metrics.rows.size(), 3u);
  for (const auto& row : metrics.rows) {
    EXPECT_FALSE(row.success);
    EXPECT_EQ(row.failure_reason, "retries-exhausted");
    EXPECT_EQ(row.retries, 5);
  }
  EXPECT_DOUBLE_EQ(metrics.success_rate, 0.0);

  config.translator.fault.kinds = {translator::FaultKind::kDropFact, translator::FaultKind::kUndeclaredObject,
                                   translator::FaultKind::kSyntaxError, translator::FaultKind::kDeleteVisited};
  const auto mixed = run_suite(config);
  for (const auto& row : mixed.rows) EXPECT_FALSE(row.failure_reason.empty());
}

}  // namespace
}  // namespace pddlego::harness
