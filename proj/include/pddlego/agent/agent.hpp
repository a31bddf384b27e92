#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pddlego/envs/cooking.hpp"
#include "pddlego/envs/environment.hpp"
#include "pddlego/pddl/ast.hpp"
#include "pddlego/planner/search.hpp"
#include "pddlego/translator/translator.hpp"

namespace pddlego::agent {

enum class Strategy { kActionGen, kPddlGen, kPddlEdit, kRandom };

const char* to_string(Strategy strategy);
Strategy parse_strategy(std::string_view text);

/// What the agent has read straight from observations, outside the problem file.
struct Knowledge {
  std::optional<std::string> coin_room;  // identifier of the room where the coin was seen
  std::optional<envs::Recipe> recipe;
  std::set<std::string> seen_items;  // display names of items seen anywhere
  std::set<std::string> held;        // display names of items taken
  std::set<std::string> opened;      // containers known to be open

  /// Folds one observation in; text that matches no template is ignored.
  void observe(std::string_view observation);
};

/// A goal builder; nullopt means the sub-goal does not apply yet.
struct SubGoal {
  std::string name;
  std::function<std::optional<pddl::Condition>(const pddl::ProblemFile&, const Knowledge&)> build;
};

/// Most preferred first.
using SubGoalStack = std::vector<SubGoal>;

/// Coin: reach-coin, explore. Cooking: recipe-complete, read-recipe,
/// reach-items, explore, search-containers. `explore` targets every
/// location without a `visited` fact as one disjunctive goal.
SubGoalStack build_subgoals(envs::EnvKind env);

/// Domain file for an environment kind, parsed once.
const pddl::DomainFile& domain_for(envs::EnvKind env);

/// Environment command for a plan step. Throws MissingDirection when a
/// movement step has no `connected` fact between its two locations.
std::string ground_action_to_command(const planner::GroundAction& action, const pddl::ProblemFile& problem);

/// Moves each ingredient's knife step just before its first cook step.
/// Everything else keeps its relative order.
planner::Plan order_plan(const planner::Plan& plan, const envs::Recipe& recipe);

struct EpisodeConfig {
  int max_retries = 5;
  planner::SearchLimits limits{};
  std::size_t grounding_cap = 1'000'000;
  std::uint64_t seed = 0;  // random strategy only
  int max_mechanical = 32;  // per iteration
};

struct EpisodeResult {
  bool success = false;
  std::size_t steps = 0;
  std::size_t invalid_steps = 0;
  std::size_t iterations = 0;
  std::vector<int> retries;  // per iteration
  std::string final_problem;
  std::string transcript;
  std::string failure_reason;  // empty on success
  std::vector<std::size_t> visited_per_iteration;  // visited facts after each accepted problem
  std::size_t translator_calls = 0;
  std::vector<nlohmann::ordered_json> trace;  // one record per iteration

  int total_retries() const;
};

/// Plays one episode. `translator` may be null for the random strategy.
/// Failures are reported in the result, never thrown.
EpisodeResult run_episode(envs::Environment& env, Strategy strategy, translator::Translator* translator,
                          const EpisodeConfig& config = {});

/// JSON lines, one per trace record.
std::string trace_jsonl(const EpisodeResult& result);

}  // namespace pddlego::agent
