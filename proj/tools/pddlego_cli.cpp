#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pddlego/agent/agent.hpp"
#include "pddlego/envs/environment.hpp"
#include "pddlego/error.hpp"
#include "pddlego/harness/harness.hpp"
#include "pddlego/pddl/parser.hpp"
#include "pddlego/pddl/validate.hpp"
#include "pddlego/planner/ground.hpp"
#include "pddlego/planner/search.hpp"

namespace {

using namespace pddlego;
using nlohmann::json;
using nlohmann::ordered_json;

/// Flags shared by run and episode. Each is applied only when given, so a
/// config file supplies the defaults.
struct SuiteFlags {
  std::string config_path;
  std::string env, difficulty, strategy, translator, seeds, out, endpoint, model, cassette, cassette_mode;
  std::string prefix;
  std::vector<std::string> fault_kinds;
  std::uint64_t seed = 0;
  int trials = 1, parallelism = 1, max_retries = 5;
  double fault_probability = 0, temperature = 1;
  std::uint64_t fault_seed = 0;
  std::size_t step_cap = 0, rooms = 0, max_requests = 0, max_tokens = 0, max_expansions = 0;
  std::map<std::string, CLI::Option*> options;

  void add_common(CLI::App* app) {
    options["config"] = app->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    options["env"] = app->add_option("--env", env, "coin | cooking");
    options["difficulty"] = app->add_option("--difficulty", difficulty, "easy | hard (cooking)");
    options["strategy"] = app->add_option("--strategy", strategy, "pddl-edit | pddl-gen | action-gen | random");
    options["translator"] = app->add_option("--translator", translator, "oracle | faulty | llm");
    options["prefix"] = app->add_option("--placeholder-prefix", prefix, "oracle placeholder prefix");
    options["fault_probability"] =
        app->add_option("--fault-probability", fault_probability, "per-call corruption probability")
            ->check(CLI::Range(0.0, 1.0));
    options["fault_kinds"] = app->add_option("--fault-kinds", fault_kinds, "drop-fact undeclared-object ...");
    options["fault_seed"] = app->add_option("--fault-seed", fault_seed, "corruption RNG seed");
    options["step_cap"] = app->add_option("--step-cap", step_cap, "override the environment step cap")
                              ->check(CLI::PositiveNumber);
    options["rooms"] = app->add_option("--rooms", rooms, "coin room count")->check(CLI::PositiveNumber);
    options["max_retries"] = app->add_option("--max-retries", max_retries, "translator retries per iteration")
                                 ->check(CLI::NonNegativeNumber);
    options["max_expansions"] = app->add_option("--max-expansions", max_expansions, "planner expansion limit")
                                    ->check(CLI::PositiveNumber);
    options["endpoint"] = app->add_option("--endpoint", endpoint, "chat completions base URL");
    options["model"] = app->add_option("--model", model, "model name");
    options["temperature"] = app->add_option("--temperature", temperature, "sampling temperature");
    options["max_requests"] = app->add_option("--max-requests", max_requests, "request budget, 0 = none");
    options["max_tokens"] = app->add_option("--max-tokens", max_tokens, "token budget, 0 = none");
    options["cassette"] = app->add_option("--cassette", cassette, "cassette JSONL path");
    options["cassette_mode"] = app->add_option("--cassette-mode", cassette_mode, "off | record | replay");
  }

  bool given(const std::string& name) const {
    const auto it = options.find(name);
    return it != options.end() && it->second->count() > 0;
  }

  harness::SuiteConfig build() const {
    harness::SuiteConfig c;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      c = harness::parse_suite_config(json::parse(in));
    }
    if (given("env")) c.env = envs::parse_env_kind(env);
    if (given("difficulty")) c.difficulty = envs::parse_difficulty(difficulty);
    if (given("strategy")) c.strategy = agent::parse_strategy(strategy);
    if (given("translator")) c.translator.kind = translator;
    if (given("prefix")) c.translator.placeholder_prefix = prefix;
    if (given("fault_probability")) c.translator.fault.probability = fault_probability;
    if (given("fault_seed")) c.translator.fault.seed = fault_seed;
    if (given("fault_kinds")) {
      c.translator.fault.kinds.clear();
      for (const auto& k : fault_kinds) c.translator.fault.kinds.push_back(translator::parse_fault_kind(k));
    }
    if (given("step_cap")) c.step_cap = step_cap;
    if (given("rooms")) c.rooms = rooms;
    if (given("max_retries")) c.episode.max_retries = max_retries;
    if (given("max_expansions")) c.episode.limits.max_expansions = max_expansions;
    if (given("endpoint")) c.translator.llm.endpoint = endpoint;
    if (given("model")) c.translator.llm.model = model;
    if (given("temperature")) c.translator.llm.temperature = temperature;
    if (given("max_requests")) c.translator.llm.max_requests = max_requests;
    if (given("max_tokens")) c.translator.llm.max_tokens = max_tokens;
    if (given("cassette")) {
      const auto mode = translator::parse_cassette_mode(given("cassette_mode") ? cassette_mode : "replay");
      c.translator.llm.cassette = std::make_shared<translator::Cassette>(cassette, mode);
    }
    return c;
  }
};

/// "10..59" or a single number.
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const auto s = std::stoull(text);
      return {s, s};
    }
    return {std::stoull(text.substr(0, dots)), std::stoull(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw PreconditionViolation("bad seed range: " + text);
  }
}

void add_env_flags(CLI::App* app, std::string& env, std::string& difficulty, std::uint64_t& seed,
                   std::size_t& rooms) {
  app->add_option("--env", env, "coin | cooking")->required();
  app->add_option("--difficulty", difficulty, "easy | hard (cooking)");
  app->add_option("--seed", seed, "environment seed")->required();
  app->add_option("--rooms", rooms, "coin room count")->check(CLI::PositiveNumber);
}

harness::SuiteConfig env_config(const std::string& env, const std::string& difficulty, std::size_t rooms) {
  harness::SuiteConfig c;
  c.env = envs::parse_env_kind(env);
  if (!difficulty.empty()) c.difficulty = envs::parse_difficulty(difficulty);
  if (rooms > 0) c.rooms = rooms;
  return c;
}

void print_trace(std::ostream& out, const agent::EpisodeResult& result) {
  for (const auto& record : result.trace) {
    out << "== iteration " << record["iteration"].get<std::size_t>();
    if (record.contains("goal_name")) out << " [" << record["goal_name"].get<std::string>() << "]";
    out << "\n";
    if (record.contains("errors"))
      for (const auto& e : record["errors"]) out << "  error: " << e.get<std::string>() << "\n";
    if (record.contains("goal")) out << "  goal: " << record["goal"].get<std::string>() << "\n";
    if (record.contains("plan"))
      for (const auto& step : record["plan"]) out << "  plan: " << step.get<std::string>() << "\n";
    const auto& commands = record["commands"];
    const auto& observations = record["observations"];
    for (std::size_t i = 0; i < commands.size(); ++i) {
      out << "  < " << commands[i].get<std::string>() << "\n";
      std::istringstream obs(observations[i].get<std::string>());
      for (std::string line; std::getline(obs, line);) out << "  > " << line << "\n";
    }
  }
}

int run_main(int argc, char** argv) {
  CLI::App app{"PDDL-based text game agents"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run a suite of episodes and write summaries");
  SuiteFlags run_flags;
  run_flags.add_common(run);
  std::string seeds;
  int trials = 1, parallelism = 1;
  std::string out_dir;
  auto* seeds_opt = run->add_option("--seeds", seeds, "seed range, e.g. 10..59");
  auto* trials_opt = run->add_option("--trials", trials, "trials per seed")->check(CLI::PositiveNumber);
  auto* par_opt = run->add_option("--parallelism,-j", parallelism, "worker threads")->check(CLI::PositiveNumber);
  auto* out_opt = run->add_option("--out", out_dir, "output directory");
  std::string compare_strategy;
  run->add_option("--compare-with", compare_strategy, "also run this strategy and print the comparison");

  // episode
  auto* episode = app.add_subcommand("episode", "play one episode");
  SuiteFlags ep_flags;
  ep_flags.add_common(episode);
  std::uint64_t ep_seed = 0;
  int ep_trial = 0;
  bool ep_trace = false;
  std::string ep_trace_out;
  episode->add_option("--seed", ep_seed, "environment seed")->required();
  episode->add_option("--trial", ep_trial, "trial index")->check(CLI::NonNegativeNumber);
  episode->add_flag("--trace", ep_trace, "pretty-print the per-iteration trace");
  episode->add_option("--trace-out", ep_trace_out, "write the trace as JSON lines");

  // solve
  auto* solve = app.add_subcommand("solve", "plan for a problem file");
  std::string domain_path, problem_path;
  std::size_t solve_expansions = 0;
  bool greedy = false;
  solve->add_option("domain", domain_path, "domain .pddl")->required()->check(CLI::ExistingFile);
  solve->add_option("problem", problem_path, "problem .pddl")->required()->check(CLI::ExistingFile);
  solve->add_option("--max-expansions", solve_expansions, "expansion limit")->check(CLI::PositiveNumber);
  solve->add_flag("--greedy", greedy, "goal-count greedy search instead of breadth-first");

  // validate
  auto* validate = app.add_subcommand("validate", "check a problem file against a domain");
  std::string v_domain, v_problem;
  validate->add_option("domain", v_domain, "domain .pddl")->required()->check(CLI::ExistingFile);
  validate->add_option("problem", v_problem, "problem .pddl")->required()->check(CLI::ExistingFile);

  // replay
  auto* replay = app.add_subcommand("replay", "rebuild the transcript of a trace");
  std::string r_trace, r_env, r_difficulty;
  std::uint64_t r_seed = 0;
  std::size_t r_rooms = 0, r_cap = 0;
  replay->add_option("trace", r_trace, "trace .jsonl")->required()->check(CLI::ExistingFile);
  add_env_flags(replay, r_env, r_difficulty, r_seed, r_rooms);
  replay->add_option("--step-cap", r_cap, "step cap used by the run")->check(CLI::PositiveNumber);

  // gen-env
  auto* gen = app.add_subcommand("gen-env", "dump a seeded environment as JSON");
  std::string g_env, g_difficulty;
  std::uint64_t g_seed = 0;
  std::size_t g_rooms = 0;
  add_env_flags(gen, g_env, g_difficulty, g_seed, g_rooms);

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    auto config = run_flags.build();
    if (seeds_opt->count()) std::tie(config.first_seed, config.last_seed) = parse_seed_range(seeds);
    if (trials_opt->count()) config.trials = trials;
    if (par_opt->count()) config.parallelism = parallelism;
    if (out_opt->count()) config.output_dir = out_dir;
    const auto metrics = harness::run_suite(config);
    std::cout << harness::to_json(metrics).dump(2) << "\n";
    if (!compare_strategy.empty()) {
      auto other = config;
      other.strategy = agent::parse_strategy(compare_strategy);
      if (!other.output_dir.empty()) other.output_dir += "/" + compare_strategy;
      const auto baseline = harness::run_suite(other);
      std::cout << harness::compare(metrics, baseline).text();
    }
    return 0;
  }

  if (*episode) {
    auto config = ep_flags.build();
    config.first_seed = config.last_seed = ep_seed;
    config.check();
    auto env = harness::make_env(config, ep_seed);
    auto episode_config = config.episode;
    episode_config.seed = envs::mix_seed({ep_seed, static_cast<std::uint64_t>(ep_trial)});
    std::unique_ptr<translator::Translator> tr;
    if (config.strategy != agent::Strategy::kRandom)
      tr = harness::make_factory(config.translator)->make(ep_seed, ep_trial);
    const auto result = agent::run_episode(*env, config.strategy, tr.get(), episode_config);
    if (ep_trace) print_trace(std::cout, result);
    else std::cout << result.transcript;
    if (!ep_trace_out.empty()) {
      std::ofstream out(ep_trace_out);
      out << agent::trace_jsonl(result);
    }
    std::cout << ordered_json{{"success", result.success},
                              {"steps", result.steps},
                              {"invalid_steps", result.invalid_steps},
                              {"iterations", result.iterations},
                              {"retries", result.total_retries()},
                              {"failure_reason", result.failure_reason}}
                     .dump()
              << "\n";
    return 0;
  }

  if (*solve) {
    const auto domain = pddl::parse_domain(pddl::read_file(domain_path));
    const auto problem = pddl::parse_problem(pddl::read_file(problem_path));
    const auto diagnostics = pddl::validate_problem(problem, domain);
    for (const auto& d : diagnostics) std::cerr << pddl::to_string(d.kind) << ": " << d.message << "\n";
    if (!diagnostics.empty()) return 1;
    planner::SearchLimits limits;
    if (solve_expansions) limits.max_expansions = solve_expansions;
    if (greedy) limits.mode = planner::SearchLimits::Mode::kGreedyGoalCount;
    const auto result = planner::solve(planner::ground(domain, problem), limits);
    if (!result.found()) {
      std::cout << planner::to_string(result.status) << "\n";
      return 2;
    }
    std::cout << planner::format_plan(result.plan);
    return 0;
  }

  if (*validate) {
    const auto domain = pddl::parse_domain(pddl::read_file(v_domain));
    const auto problem = pddl::parse_problem(pddl::read_file(v_problem));
    const auto diagnostics = pddl::validate_problem(problem, domain);
    for (const auto& d : diagnostics) std::cout << pddl::to_string(d.kind) << ": " << d.message << "\n";
    if (diagnostics.empty()) std::cout << "ok\n";
    return diagnostics.empty() ? 0 : 1;
  }

  if (*replay) {
    auto config = env_config(r_env, r_difficulty, r_rooms);
    if (r_cap) config.step_cap = r_cap;
    const auto env = harness::make_env(config, r_seed);
    std::vector<std::string> commands;
    std::ifstream in(r_trace);
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      const auto record = json::parse(line);
      if (!record.contains("commands")) throw PreconditionViolation("trace record without commands");
      for (const auto& c : record["commands"]) commands.push_back(c.get<std::string>());
    }
    std::cout << envs::transcript(*env, commands);
    return 0;
  }

  if (*gen) {
    const auto config = env_config(g_env, g_difficulty, g_rooms);
    std::cout << harness::make_env(config, g_seed)->snapshot().dump(2) << "\n";
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
