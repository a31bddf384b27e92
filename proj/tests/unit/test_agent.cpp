#include <gtest/gtest.h>

#include "pddlego/agent/agent.hpp"
#include "pddlego/edit/delta.hpp"
#include "pddlego/envs/coin.hpp"
#include "pddlego/envs/cooking.hpp"
#include "pddlego/error.hpp"
#include "pddlego/pddl/parser.hpp"
#include "pddlego/pddl/printer.hpp"
#include "pddlego/planner/ground.hpp"
#include "pddlego/translator/faulty.hpp"
#include "pddlego/translator/oracle.hpp"

namespace pddlego::agent {
namespace {

using envs::EnvKind;

pddl::ProblemFile problem(const std::string& objects, const std::string& init) {
  return pddl::parse_problem("(define (problem p) (:domain environment) (:objects " + objects + ") (:init " + init +
                             ") (:goal (and)))");
}

planner::GroundAction action(std::string name, std::vector<std::string> args) {
  planner::GroundAction a;
  a.name = std::move(name);
  a.args = std::move(args);
  return a;
}

std::optional<pddl::Condition> goal_named(const std::string& name, EnvKind env, const pddl::ProblemFile& pf,
                                          const Knowledge& k) {
  for (const auto& sub : build_subgoals(env))
    if (sub.name == name) return sub.build(pf, k);
  return std::nullopt;
}

TEST(Agent, CommandsFromPlanSteps) {
  auto pf = problem("kitchen unk_1 backyard - location south - direction yellow_potato - ingredient bbq - barbeque",
                    "(at kitchen) (connected kitchen unk_1 south)");
  EXPECT_EQ(ground_action_to_command(action("open_door", {"kitchen", "unk_1"}), pf), "open door to south");
  EXPECT_EQ(ground_action_to_command(action("move", {"kitchen", "unk_1", "south"}), pf), "move south");
  EXPECT_EQ(ground_action_to_command(action("use_barbeque", {"yellow_potato", "backyard", "barbeque"}), pf),
            "cook yellow potato in barbeque");
  EXPECT_EQ(ground_action_to_command(action("dice", {"red_apple", "knife"}), pf), "dice red apple");
  EXPECT_THROW(ground_action_to_command(action("move", {"kitchen", "backyard", "north"}), pf), MissingDirection);
  EXPECT_THROW(ground_action_to_command(action("open_door", {"unk_1", "kitchen"}), pf), MissingDirection);
}

TEST(Agent, OrderPlanPutsKnifeBeforeCook) {
  envs::Recipe recipe{{{"yellow potato", envs::KnifeStep::kChop, envs::CookStep::kGrill},
                       {"red apple", envs::KnifeStep::kDice, envs::CookStep::kRoast}}};
  planner::Plan plan;
  plan.steps = {action("use_toaster", {"yellow_potato", "kitchen", "toaster"}), action("chop", {"yellow_potato", "knife"})};
  auto ordered = order_plan(plan, recipe);
  ASSERT_EQ(ordered.size(), 2u);
  EXPECT_EQ(ordered.steps[0].name, "chop");
  EXPECT_EQ(ordered.steps[1].name, "use_toaster");

  // Both orders are valid PDDL plans; only the reordered one suits the game.
  const auto& domain = domain_for(EnvKind::kCooking);
  auto pf = problem("kitchen - location yellow_potato - ingredient knife - knife toaster - toaster",
                    "(at kitchen) (obj_at toaster kitchen) (have yellow_potato) (have knife)");
  pf = edit::set_goal(pf, pddl::parse_condition("(and (chopped yellow_potato) (grilled yellow_potato))"));
  auto task = planner::ground(domain, pf);
  auto solved = planner::solve(task);
  ASSERT_TRUE(solved.found());
  EXPECT_TRUE(planner::validate_plan(task, solved.plan).ok);
  EXPECT_TRUE(planner::validate_plan(task, order_plan(solved.plan, recipe)).ok);

  planner::Plan nav;
  nav.steps = {action("move", {"a", "b", "north"}), action("dice", {"red_apple", "knife"})};
  EXPECT_EQ(order_plan(nav, recipe).steps[0].name, "move");

  planner::Plan mixed;
  mixed.steps = {action("move", {"kitchen", "backyard", "south"}),
                 action("use_barbeque", {"yellow_potato", "backyard", "barbeque"}),
                 action("move", {"backyard", "kitchen", "north"}), action("use_oven", {"red_apple", "kitchen", "oven"}),
                 action("dice", {"red_apple", "knife"}), action("chop", {"yellow_potato", "knife"})};
  auto m = order_plan(mixed, recipe);
  std::vector<std::string> names;
  for (const auto& s : m.steps) names.push_back(s.name);
  EXPECT_EQ(names, (std::vector<std::string>{"move", "chop", "use_barbeque", "move", "dice", "use_oven"}));
}

TEST(Agent, CoinSubGoals) {
  auto pf = problem("kitchen unk_1 - location south - direction",
                    "(at kitchen) (visited kitchen) (connected kitchen unk_1 south) (closed_door kitchen unk_1)");
  Knowledge k;
  EXPECT_FALSE(goal_named("reach-coin", EnvKind::kCoin, pf, k));
  EXPECT_EQ(pddl::to_string(*goal_named("explore", EnvKind::kCoin, pf, k)), "(at unk_1)");
  k.observe("You are in the kitchen. In one part of the room you see a coin. To the South you see a closed wood door.");
  EXPECT_EQ(pddl::to_string(*goal_named("reach-coin", EnvKind::kCoin, pf, k)), "(at kitchen)");
}

TEST(Agent, CookingRecipeGoalMatchesTheRecipe) {
  auto pf = problem(
      "kitchen backyard - location block_of_cheese red_apple yellow_potato - ingredient knife - knife barbeque - barbeque",
      "(at backyard) (visited kitchen) (visited backyard) (obj_at barbeque backyard) (have block_of_cheese) "
      "(have red_apple) (have yellow_potato) (have knife)");
  Knowledge k;
  envs::Recipe recipe{{{"block of cheese", envs::KnifeStep::kSlice, envs::CookStep::kNone},
                       {"red apple", envs::KnifeStep::kDice, envs::CookStep::kNone},
                       {"yellow potato", envs::KnifeStep::kChop, envs::CookStep::kGrill}}};
  k.observe(recipe.text());
  ASSERT_TRUE(k.recipe.has_value());
  auto goal = goal_named("recipe-complete", EnvKind::kCooking, pf, k);
  ASSERT_TRUE(goal);
  EXPECT_EQ(pddl::to_string(*goal),
            "(and (sliced block_of_cheese) (diced red_apple) (chopped yellow_potato) (grilled yellow_potato) (at "
            "kitchen))");
  pf.init.erase(pddl::Atom{"have", {"red_apple"}});
  EXPECT_FALSE(goal_named("recipe-complete", EnvKind::kCooking, pf, k));
}

TEST(Agent, DroppedConnectionFallsBackToAnotherFrontier) {
  // The edge to unk_1 was lost; reaching it alone is unsolvable, the explore goal is not.
  auto pf = problem("kitchen unk_1 unk_2 - location south east - direction",
                    "(at kitchen) (visited kitchen) (closed_door kitchen unk_1) (connected kitchen unk_2 east) "
                    "(closed_door kitchen unk_2)");
  const auto& domain = domain_for(EnvKind::kCoin);
  auto only = planner::solve(planner::ground(domain, edit::set_goal(pf, pddl::parse_condition("(at unk_1)"))));
  EXPECT_EQ(only.status, planner::SolveStatus::kUnsolvable);
  auto any = planner::solve(planner::ground(domain, edit::set_goal(pf, *goal_named("explore", EnvKind::kCoin, pf, {}))));
  ASSERT_TRUE(any.found());
  EXPECT_EQ(planner::format_plan(any.plan), "(open_door kitchen unk_2)\n(move kitchen unk_2 east)\n");
}

TEST(Agent, OracleCoinEpisodesSucceedWithGrowingVisits) {
  for (std::uint64_t seed = 10; seed < 60; ++seed) {
    auto env = envs::gen_coin_env(seed);
    translator::OracleTranslator oracle;
    auto r = run_episode(env, Strategy::kPddlEdit, &oracle);
    EXPECT_TRUE(r.success) << seed << " " << r.failure_reason;
    EXPECT_EQ(r.invalid_steps, 0u) << seed;
    EXPECT_LE(r.steps, 50u);
    for (std::size_t i = 1; i < r.visited_per_iteration.size(); ++i)
      EXPECT_GT(r.visited_per_iteration[i], r.visited_per_iteration[i - 1]) << seed;
    for (int retries : r.retries) EXPECT_EQ(retries, 0);
  }
}

TEST(Agent, OracleCookingEpisodesSucceed) {
  for (auto difficulty : {envs::Difficulty::kEasy, envs::Difficulty::kHard}) {
    for (std::uint64_t seed = 10; seed < 60; ++seed) {
      auto env = envs::gen_cooking_env(seed, difficulty);
      translator::OracleTranslator oracle;
      auto r = run_episode(env, Strategy::kPddlEdit, &oracle);
      EXPECT_TRUE(r.success) << seed << " " << r.failure_reason;
      EXPECT_EQ(r.invalid_steps, 0u);
      EXPECT_LE(r.steps, env.step_cap());
    }
  }
}

TEST(Agent, PddlGenRegeneratesTheWholeProblem) {
  auto env = envs::gen_coin_env(12);
  translator::OracleTranslator oracle;
  auto r = run_episode(env, Strategy::kPddlGen, &oracle);
  EXPECT_TRUE(r.success);
  ASSERT_FALSE(r.trace.empty());
  EXPECT_NE(r.trace.front()["problem"].get<std::string>().find("(define (problem coin-exploration)"),
            std::string::npos);
}

TEST(Agent, UnparseableOutputExhaustsExactlyFiveRetries) {
  auto env = envs::gen_coin_env(10);
  translator::FaultyTranslator faulty(std::make_unique<translator::OracleTranslator>(),
                                      {1.0, {translator::FaultKind::kSyntaxError}, 0});
  auto r = run_episode(env, Strategy::kPddlEdit, &faulty);
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.failure_reason, "retries-exhausted");
  EXPECT_EQ(r.retries, std::vector<int>{5});
  EXPECT_EQ(r.translator_calls, 6u);
  EXPECT_EQ(faulty.log().size(), 6u);
  EXPECT_EQ(r.steps, 0u);
}

TEST(Agent, BadEditsAreRetriedNotApplied) {
  for (auto kind : {translator::FaultKind::kDeleteVisited, translator::FaultKind::kUndeclaredObject}) {
    auto env = envs::gen_coin_env(11);
    translator::FaultyTranslator faulty(std::make_unique<translator::OracleTranslator>(), {0.3, {kind}, 7});
    auto r = run_episode(env, Strategy::kPddlEdit, &faulty);
    EXPECT_TRUE(r.success) << translator::to_string(kind) << " " << r.failure_reason;
    EXPECT_GT(r.total_retries(), 0);
    EXPECT_EQ(r.invalid_steps, 0u);
  }
}

TEST(Agent, ActionGenAsksTheTranslatorEveryStep) {
  auto env = envs::gen_coin_env(10);
  translator::OracleTranslator oracle;
  auto r = run_episode(env, Strategy::kActionGen, &oracle);
  EXPECT_EQ(r.translator_calls, r.steps);
  EXPECT_EQ(r.iterations, r.steps);
  for (const auto& record : r.trace) EXPECT_FALSE(record.contains("plan"));
}

TEST(Agent, RandomWalkerIsSeededAndRespectsTheCap) {
  auto a = envs::gen_coin_env(20);
  auto b = envs::gen_coin_env(20);
  EpisodeConfig cfg;
  cfg.seed = 99;
  auto ra = run_episode(a, Strategy::kRandom, nullptr, cfg);
  auto rb = run_episode(b, Strategy::kRandom, nullptr, cfg);
  EXPECT_EQ(ra.transcript, rb.transcript);
  EXPECT_LE(ra.steps, 50u);
  if (!ra.success) EXPECT_EQ(ra.failure_reason, "step-cap");
}

TEST(Agent, TraceIsJsonLines) {
  auto env = envs::gen_cooking_env(3, envs::Difficulty::kEasy);
  translator::OracleTranslator oracle;
  auto r = run_episode(env, Strategy::kPddlEdit, &oracle);
  const std::string text = trace_jsonl(r);
  std::size_t lines = 0;
  for (std::size_t pos = 0, next; (next = text.find('\n', pos)) != std::string::npos; pos = next + 1, ++lines) {
    auto record = nlohmann::json::parse(text.substr(pos, next - pos));
    EXPECT_TRUE(record.contains("iteration"));
  }
  EXPECT_EQ(lines, r.trace.size());
  EXPECT_EQ(r.iterations, r.trace.size());
}

}  // namespace
}  // namespace pddlego::agent
