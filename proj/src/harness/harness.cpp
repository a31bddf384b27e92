#include "pddlego/harness/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "pddlego/envs/coin.hpp"
#include "pddlego/envs/cooking.hpp"
#include "pddlego/envs/rng.hpp"
#include "pddlego/error.hpp"
#include "pddlego/translator/oracle.hpp"

namespace pddlego::harness {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(6);
  out << std::fixed << v;
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

SeedStats seed_stats(std::uint64_t seed, const std::vector<const EpisodeRow*>& rows) {
  SeedStats s;
  s.seed = seed;
  std::vector<double> steps;
  for (const auto* r : rows) {
    ++s.trials;
    if (r->success) {
      ++s.successes;
      steps.push_back(static_cast<double>(r->steps));
    }
  }
  const auto m = moments(steps);
  s.mean_steps = m.mean;
  s.stddev_steps = m.stddev;
  s.stddev_defined = m.stddev_defined;
  return s;
}

}  // namespace

void SuiteConfig::check() const {
  if (last_seed < first_seed) throw PreconditionViolation("seed range is empty");
  if (trials < 1) throw PreconditionViolation("trials must be at least 1");
  if (parallelism < 1) throw PreconditionViolation("parallelism must be at least 1");
  if (step_cap && *step_cap == 0) throw PreconditionViolation("step cap must be positive");
  if (translator.kind != "oracle" && translator.kind != "faulty" && translator.kind != "llm")
    throw PreconditionViolation("unknown translator kind: " + translator.kind);
  translator.fault.check();
}

std::vector<std::uint64_t> SuiteConfig::seeds() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = first_seed; s <= last_seed; ++s) out.push_back(s);
  return out;
}

SuiteConfig parse_suite_config(const json& j) {
  SuiteConfig c;
  if (j.contains("env")) c.env = envs::parse_env_kind(j["env"].get<std::string>());
  if (j.contains("difficulty")) c.difficulty = envs::parse_difficulty(j["difficulty"].get<std::string>());
  if (j.contains("first_seed")) c.first_seed = j["first_seed"].get<std::uint64_t>();
  if (j.contains("last_seed")) c.last_seed = j["last_seed"].get<std::uint64_t>();
  if (j.contains("trials")) c.trials = j["trials"].get<int>();
  if (j.contains("strategy")) c.strategy = agent::parse_strategy(j["strategy"].get<std::string>());
  if (j.contains("step_cap")) c.step_cap = j["step_cap"].get<std::size_t>();
  if (j.contains("rooms")) c.rooms = j["rooms"].get<std::size_t>();
  if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("parallelism")) c.parallelism = j["parallelism"].get<int>();
  if (j.contains("max_retries")) c.episode.max_retries = j["max_retries"].get<int>();
  if (j.contains("max_expansions")) c.episode.limits.max_expansions = j["max_expansions"].get<std::size_t>();
  if (j.contains("timeout_ms")) c.episode.limits.timeout = std::chrono::milliseconds(j["timeout_ms"].get<long>());
  if (j.contains("translator")) {
    const auto& t = j["translator"];
    auto& spec = c.translator;
    if (t.contains("kind")) spec.kind = t["kind"].get<std::string>();
    if (t.contains("placeholder_prefix")) spec.placeholder_prefix = t["placeholder_prefix"].get<std::string>();
    if (t.contains("fault_probability")) spec.fault.probability = t["fault_probability"].get<double>();
    if (t.contains("fault_seed")) spec.fault.seed = t["fault_seed"].get<std::uint64_t>();
    if (t.contains("fault_kinds")) {
      spec.fault.kinds.clear();
      for (const auto& k : t["fault_kinds"]) spec.fault.kinds.push_back(translator::parse_fault_kind(k.get<std::string>()));
    }
    if (t.contains("endpoint")) spec.llm.endpoint = t["endpoint"].get<std::string>();
    if (t.contains("model")) spec.llm.model = t["model"].get<std::string>();
    if (t.contains("temperature")) spec.llm.temperature = t["temperature"].get<double>();
    if (t.contains("force_json")) spec.llm.force_json = t["force_json"].get<bool>();
    if (t.contains("max_requests")) spec.llm.max_requests = t["max_requests"].get<std::size_t>();
    if (t.contains("max_tokens")) spec.llm.max_tokens = t["max_tokens"].get<std::size_t>();
    if (t.contains("min_interval_seconds")) spec.llm.min_interval_seconds = t["min_interval_seconds"].get<double>();
    if (t.contains("cassette")) {
      const auto mode = translator::parse_cassette_mode(t.value("cassette_mode", "replay"));
      spec.llm.cassette = std::make_shared<translator::Cassette>(t["cassette"].get<std::string>(), mode);
    }
  }
  return c;
}

Moments moments(const std::vector<double>& values) {
  Moments m;
  if (values.empty()) return m;
  for (double v : values) m.mean += v;
  m.mean /= static_cast<double>(values.size());
  if (values.size() < 2) return m;
  double ss = 0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  m.stddev_defined = true;
  return m;
}

std::unique_ptr<envs::Environment> make_env(const SuiteConfig& config, std::uint64_t seed) {
  if (config.env == envs::EnvKind::kCoin) {
    envs::CoinParams params;
    if (config.rooms) params.rooms = *config.rooms;
    if (config.step_cap) params.step_cap = *config.step_cap;
    return std::make_unique<envs::CoinEnv>(seed, params);
  }
  auto params = config.difficulty == envs::Difficulty::kHard ? envs::CookingParams::hard() : envs::CookingParams::easy();
  if (config.step_cap) params.step_cap = *config.step_cap;
  return std::make_unique<envs::CookingEnv>(seed, params);
}

std::shared_ptr<const translator::TranslatorFactory> make_factory(const TranslatorSpec& spec) {
  auto oracle = std::make_shared<translator::OracleFactory>(translator::OracleOptions{spec.placeholder_prefix});
  if (spec.kind == "oracle") return oracle;
  if (spec.kind == "faulty") return std::make_shared<translator::FaultyFactory>(oracle, spec.fault);
  if (spec.kind == "llm") return std::make_shared<translator::LlmFactory>(spec.llm);
  throw PreconditionViolation("unknown translator kind: " + spec.kind);
}

Metrics summarize(std::vector<EpisodeRow> rows, const std::string& env) {
  std::sort(rows.begin(), rows.end(), [](const EpisodeRow& a, const EpisodeRow& b) {
    return std::tie(a.seed, a.trial) < std::tie(b.seed, b.trial);
  });
  Metrics m;
  m.env = env;
  if (!rows.empty()) {
    m.strategy = rows.front().strategy;
    m.translator = rows.front().translator;
  }
  m.episodes = rows.size();
  std::vector<double> steps;
  double invalid = 0;
  std::map<std::uint64_t, std::vector<const EpisodeRow*>> by_seed;
  for (const auto& r : rows) {
    if (r.success) steps.push_back(static_cast<double>(r.steps));
    invalid += static_cast<double>(r.invalid_steps);
    by_seed[r.seed].push_back(&r);
  }
  if (!rows.empty()) {
    m.success_rate = static_cast<double>(steps.size()) / static_cast<double>(rows.size());
    m.mean_invalid_steps = invalid / static_cast<double>(rows.size());
  }
  const auto all = moments(steps);
  m.mean_steps = all.mean;
  m.stddev_steps = all.stddev;
  m.stddev_defined = all.stddev_defined;
  for (const auto& [seed, seed_rows] : by_seed) m.per_seed.push_back(seed_stats(seed, seed_rows));
  m.rows = std::move(rows);
  return m;
}

Metrics run_suite(const SuiteConfig& config) {
  config.check();
  const bool needs_translator = config.strategy != agent::Strategy::kRandom;
  const auto factory = needs_translator ? make_factory(config.translator) : nullptr;
  const std::string translator_name = needs_translator ? factory->name() : "none";

  struct Job {
    std::uint64_t seed;
    int trial;
  };
  std::vector<Job> jobs;
  for (auto seed : config.seeds())
    for (int t = 0; t < config.trials; ++t) jobs.push_back({seed, t});
  std::vector<EpisodeRow> rows(jobs.size());
  std::vector<std::string> traces(jobs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      const auto [seed, trial] = jobs[i];
      EpisodeRow& row = rows[i];
      row.seed = seed;
      row.trial = trial;
      row.strategy = agent::to_string(config.strategy);
      row.translator = translator_name;
      try {
        auto env = make_env(config, seed);
        auto episode = config.episode;
        episode.seed = envs::mix_seed({seed, static_cast<std::uint64_t>(trial)});
        auto translator = needs_translator ? factory->make(seed, trial) : nullptr;
        const auto result = agent::run_episode(*env, config.strategy, translator.get(), episode);
        row.success = result.success;
        row.steps = result.steps;
        row.invalid_steps = result.invalid_steps;
        row.iterations = result.iterations;
        row.retries = result.total_retries();
        row.failure_reason = result.failure_reason;
        traces[i] = agent::trace_jsonl(result);
      } catch (const std::exception& e) {
        row.success = false;
        row.failure_reason = "error";
        traces[i] = ordered_json{{"error", e.what()}}.dump() + "\n";
      }
    }
  };
  const int workers = std::min<int>(config.parallelism, static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Metrics metrics = summarize(rows, envs::to_string(config.env));
  if (!config.output_dir.empty()) {
    const std::filesystem::path dir(config.output_dir);
    std::filesystem::create_directories(dir / "traces");
    write_file(dir / "summary.csv", to_csv(metrics));
    write_file(dir / "summary.json", to_json(metrics).dump(2) + "\n");
    for (std::size_t i = 0; i < jobs.size(); ++i)
      write_file(dir / "traces" /
                     ("seed" + std::to_string(jobs[i].seed) + "-trial" + std::to_string(jobs[i].trial) + ".jsonl"),
                 traces[i]);
  }
  return metrics;
}

std::string to_csv(const Metrics& metrics) {
  std::string out = "seed,trial,strategy,translator,success,steps,invalid_steps,iterations,retries,failure_reason\n";
  for (const auto& r : metrics.rows) {
    std::string reason = r.failure_reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    out += std::to_string(r.seed) + "," + std::to_string(r.trial) + "," + r.strategy + "," + r.translator + "," +
           (r.success ? "1" : "0") + "," + std::to_string(r.steps) + "," + std::to_string(r.invalid_steps) + "," +
           std::to_string(r.iterations) + "," + std::to_string(r.retries) + "," + reason + "\n";
  }
  return out;
}

ordered_json to_json(const Metrics& m) {
  ordered_json out{{"env", m.env},
                   {"strategy", m.strategy},
                   {"translator", m.translator},
                   {"episodes", m.episodes},
                   {"success_rate", m.success_rate},
                   {"mean_steps", m.mean_steps},
                   {"stddev_steps", m.stddev_steps},
                   {"stddev_defined", m.stddev_defined},
                   {"mean_invalid_steps", m.mean_invalid_steps},
                   {"per_seed", ordered_json::array()}};
  for (const auto& s : m.per_seed)
    out["per_seed"].push_back({{"seed", s.seed},
                               {"trials", s.trials},
                               {"successes", s.successes},
                               {"mean_steps", s.mean_steps},
                               {"stddev_steps", s.stddev_steps},
                               {"stddev_defined", s.stddev_defined}});
  return out;
}

Report compare(const Metrics& a, const Metrics& b) {
  if (a.env != b.env) throw IncomparableSuites("suites ran on different environments");
  std::set<std::uint64_t> seeds_a, seeds_b;
  for (const auto& s : a.per_seed) seeds_a.insert(s.seed);
  for (const auto& s : b.per_seed) seeds_b.insert(s.seed);
  if (seeds_a != seeds_b) throw IncomparableSuites("suites cover different seeds");

  Report report;
  std::vector<double> steps_a, steps_b;
  for (std::size_t i = 0; i < a.per_seed.size(); ++i) {
    const auto& sa = a.per_seed[i];
    const auto& sb = b.per_seed[i];
    report.per_seed.push_back({sa.seed, sa, sb});
    if (sa.successes == 0 || sb.successes == 0) continue;
    report.common_seeds.push_back(sa.seed);
    for (const auto& r : a.rows)
      if (r.seed == sa.seed && r.success) steps_a.push_back(static_cast<double>(r.steps));
    for (const auto& r : b.rows)
      if (r.seed == sb.seed && r.success) steps_b.push_back(static_cast<double>(r.steps));
  }
  report.mean_a = moments(steps_a).mean;
  report.mean_b = moments(steps_b).mean;
  if (report.mean_b > 0) report.efficiency = 1.0 - report.mean_a / report.mean_b;
  return report;
}

std::string Report::text() const {
  std::string out = "seed,a_mean,a_stddev,a_successes,b_mean,b_stddev,b_successes\n";
  for (const auto& s : per_seed)
    out += std::to_string(s.seed) + "," + format_number(s.a.mean_steps) + "," + format_number(s.a.stddev_steps) + "," +
           std::to_string(s.a.successes) + "," + format_number(s.b.mean_steps) + "," +
           format_number(s.b.stddev_steps) + "," + std::to_string(s.b.successes) + "\n";
  out += "common successful seeds: " + std::to_string(common_seeds.size()) + "\n";
  out += "mean steps a: " + format_number(mean_a) + ", b: " + format_number(mean_b) + "\n";
  out += "efficiency gain: " + format_number(100.0 * efficiency) + "%\n";
  return out;
}

}  // namespace pddlego::harness
