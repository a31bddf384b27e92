#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pddlego/agent/agent.hpp"
#include "pddlego/envs/environment.hpp"
#include "pddlego/translator/faulty.hpp"
#include "pddlego/translator/llm.hpp"

namespace pddlego::harness {

struct TranslatorSpec {
  std::string kind = "oracle";  // oracle | faulty | llm
  std::string placeholder_prefix = "unk_";
  translator::FaultProfile fault;  // faulty only; wraps the oracle
  translator::LlmConfig llm;       // llm only
};

struct SuiteConfig {
  envs::EnvKind env = envs::EnvKind::kCoin;
  envs::Difficulty difficulty = envs::Difficulty::kEasy;
  std::uint64_t first_seed = 10;
  std::uint64_t last_seed = 59;  // inclusive
  int trials = 1;
  agent::Strategy strategy = agent::Strategy::kPddlEdit;
  TranslatorSpec translator;
  std::optional<std::size_t> step_cap;  // default: the environment's own cap
  std::optional<std::size_t> rooms;     // coin only; default 11
  agent::EpisodeConfig episode;
  std::string output_dir;  // empty: nothing is written
  int parallelism = 1;

  /// Throws PreconditionViolation on an empty seed range, trials < 1 or parallelism < 1.
  void check() const;
  std::vector<std::uint64_t> seeds() const;
};

/// Reads a JSON config; keys mirror the struct fields and all are optional.
SuiteConfig parse_suite_config(const nlohmann::json& json);

struct EpisodeRow {
  std::uint64_t seed = 0;
  int trial = 0;
  std::string strategy;
  std::string translator;
  bool success = false;
  std::size_t steps = 0;
  std::size_t invalid_steps = 0;
  std::size_t iterations = 0;
  int retries = 0;
  std::string failure_reason;
};

struct SeedStats {
  std::uint64_t seed = 0;
  int trials = 0;
  int successes = 0;
  double mean_steps = 0;  // over successes
  double stddev_steps = 0;  // sample stddev over successes; 0 when undefined
  bool stddev_defined = false;
};

struct Metrics {
  std::string env;
  std::string strategy;
  std::string translator;
  std::size_t episodes = 0;
  double success_rate = 0;
  double mean_steps = 0;  // over successful episodes
  double stddev_steps = 0;
  bool stddev_defined = false;  // false with fewer than two successes
  double mean_invalid_steps = 0;
  std::vector<EpisodeRow> rows;  // sorted by (seed, trial)
  std::vector<SeedStats> per_seed;
};

/// Mean and sample standard deviation; the flag is false below two values.
struct Moments {
  double mean = 0;
  double stddev = 0;
  bool stddev_defined = false;
};
Moments moments(const std::vector<double>& values);

std::unique_ptr<envs::Environment> make_env(const SuiteConfig& config, std::uint64_t seed);
std::shared_ptr<const translator::TranslatorFactory> make_factory(const TranslatorSpec& spec);

/// Aggregates rows; they are sorted by (seed, trial) first.
Metrics summarize(std::vector<EpisodeRow> rows, const std::string& env);

/// Runs seeds x trials episodes on `parallelism` workers. Output does not
/// depend on the worker count. Writes summary.csv, summary.json and one
/// trace per episode under output_dir when it is set.
Metrics run_suite(const SuiteConfig& config);

std::string to_csv(const Metrics& metrics);
nlohmann::ordered_json to_json(const Metrics& metrics);

struct SeedComparison {
  std::uint64_t seed = 0;
  SeedStats a;
  SeedStats b;
};

struct Report {
  double efficiency = 0;  // 1 - mean(a) / mean(b) over the common successful seeds
  double mean_a = 0;
  double mean_b = 0;
  std::vector<std::uint64_t> common_seeds;
  std::vector<SeedComparison> per_seed;

  /// Per-seed "mean ± stddev" table and the efficiency line.
  std::string text() const;
};

/// Throws IncomparableSuites unless both suites cover the same env and seeds.
Report compare(const Metrics& a, const Metrics& b);

}  // namespace pddlego::harness
