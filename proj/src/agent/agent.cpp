#include "pddlego/agent/agent.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "pddlego/edit/delta.hpp"
#include "pddlego/envs/rng.hpp"
#include "pddlego/envs/text.hpp"
#include "pddlego/error.hpp"
#include "pddlego/pddl/parser.hpp"
#include "pddlego/pddl/printer.hpp"
#include "pddlego/pddl/validate.hpp"
#include "pddlego/planner/ground.hpp"
#include "pddlego/resources.hpp"
#include "pddlego/translator/observation.hpp"

namespace pddlego::agent {
namespace {

using nlohmann::ordered_json;
using pddl::Atom;
using pddl::Condition;
using pddl::ProblemFile;

std::optional<std::string> current_location(const ProblemFile& pf) {
  auto at = pf.facts("at");
  if (at.size() != 1) return std::nullopt;
  return at.front().args[0];
}

bool holds(const ProblemFile& pf, std::string predicate, std::vector<std::string> args) {
  return pf.init.count(Atom{std::move(predicate), std::move(args)}) > 0;
}

std::optional<Condition> reach_any(const std::set<std::string>& locations) {
  if (locations.empty()) return std::nullopt;
  std::vector<Condition> parts;
  for (const auto& l : locations) parts.push_back(Condition::of({"at", {l}}));
  if (parts.size() == 1) return parts.front();
  return Condition::any(std::move(parts));
}

std::optional<Condition> explore(const ProblemFile& pf, const Knowledge&) {
  std::set<std::string> unvisited;
  for (const auto& l : pf.objects_of_type("location"))
    if (!holds(pf, "visited", {l})) unvisited.insert(l);
  return reach_any(unvisited);
}

std::vector<std::string> needed_items(const Knowledge& k) {
  std::vector<std::string> out;
  if (!k.recipe) return out;
  for (const auto& item : k.recipe->items) out.push_back(item.name);
  if (k.recipe->needs_knife()) out.emplace_back("knife");
  return out;
}

bool some_needed_unlocated(const Knowledge& k) {
  for (const auto& n : needed_items(k))
    if (!k.held.count(n) && !k.seen_items.count(n)) return true;
  return false;
}

std::vector<std::string> appliances_for(envs::CookStep step) {
  std::vector<std::string> out;
  for (const auto& a : envs::appliance_names())
    if (envs::appliance_step(a) == step) out.push_back(envs::to_identifier(a));
  return out;
}

std::string processed_predicate(envs::KnifeStep s) {
  switch (s) {
    case envs::KnifeStep::kSlice: return "sliced";
    case envs::KnifeStep::kChop: return "chopped";
    case envs::KnifeStep::kDice: return "diced";
    case envs::KnifeStep::kNone: break;
  }
  return "";
}

std::string processed_predicate(envs::CookStep s) {
  switch (s) {
    case envs::CookStep::kGrill: return "grilled";
    case envs::CookStep::kRoast: return "roasted";
    case envs::CookStep::kFry: return "fried";
    case envs::CookStep::kNone: break;
  }
  return "";
}

std::optional<Condition> recipe_complete(const ProblemFile& pf, const Knowledge& k) {
  if (!k.recipe || !pf.has_object("kitchen")) return std::nullopt;
  if (k.recipe->needs_knife() && !holds(pf, "have", {"knife"})) return std::nullopt;
  std::vector<Condition> parts;
  for (const auto& item : k.recipe->items) {
    const std::string id = envs::to_identifier(item.name);
    if (!holds(pf, "have", {id})) return std::nullopt;
    if (item.knife != envs::KnifeStep::kNone) parts.push_back(Condition::of({processed_predicate(item.knife), {id}}));
    if (item.cook == envs::CookStep::kNone) continue;
    bool located = false;
    for (const auto& app : appliances_for(item.cook))
      for (const auto& a : pf.facts("obj_at"))
        located = located || a.args[0] == app;
    if (!located) return std::nullopt;
    parts.push_back(Condition::of({processed_predicate(item.cook), {id}}));
  }
  parts.push_back(Condition::of({"at", {"kitchen"}}));
  return Condition::all(std::move(parts));
}

std::optional<Condition> read_recipe(const ProblemFile& pf, const Knowledge& k) {
  if (k.recipe || !pf.has_object("kitchen") || current_location(pf) == "kitchen") return std::nullopt;
  return Condition::of({"at", {"kitchen"}});
}

std::optional<Condition> reach_items(const ProblemFile& pf, const Knowledge& k) {
  const auto here = current_location(pf);
  std::set<std::string> targets;
  for (const auto& n : needed_items(k)) {
    const std::string id = envs::to_identifier(n);
    if (holds(pf, "have", {id})) continue;
    for (const auto& a : pf.facts("obj_at"))
      if (a.args[0] == id && a.args[1] != here) targets.insert(a.args[1]);
  }
  return reach_any(targets);
}

/// Rooms holding containers not yet opened, while something needed is still unseen.
std::optional<Condition> search_containers(const ProblemFile& pf, const Knowledge& k) {
  if (!k.recipe || !some_needed_unlocated(k)) return std::nullopt;
  const auto here = current_location(pf);
  std::set<std::string> opened;
  for (const auto& c : k.opened) opened.insert(envs::to_identifier(c));
  std::set<std::string> targets;
  for (const auto& c : pf.objects_of_type("container")) {
    if (opened.count(c)) continue;
    for (const auto& a : pf.facts("obj_at"))
      if (a.args[0] == c && a.args[1] != here) targets.insert(a.args[1]);
  }
  return reach_any(targets);
}

std::optional<Condition> reach_coin(const ProblemFile& pf, const Knowledge& k) {
  if (!k.coin_room || !pf.has_object(*k.coin_room)) return std::nullopt;
  return Condition::of({"at", {*k.coin_room}});
}

bool is_knife_action(const std::string& name) { return name == "chop" || name == "slice" || name == "dice"; }
bool is_cook_action(const std::string& name) { return name.rfind("use_", 0) == 0; }

std::string failure_label(const std::string& env_reason) {
  if (env_reason.rfind("step cap", 0) == 0) return "step-cap";
  if (env_reason.rfind("processing error", 0) == 0) return "processing-error";
  std::string out = env_reason;
  std::replace(out.begin(), out.end(), ',', ';');
  return out;
}

/// The outcome of one translate-validate-plan attempt.
struct Planned {
  ProblemFile problem;
  std::string goal_name;
  Condition goal;
  planner::Plan plan;
  std::vector<std::string> commands;
};

class Episode {
 public:
  Episode(envs::Environment& env, Strategy strategy, translator::Translator* translator, const EpisodeConfig& config)
      : env_(env), strategy_(strategy), translator_(translator), config_(config) {}

  EpisodeResult run() {
    const auto first = env_.observe();
    const std::string entry = envs::transcript_entry("", first.text);
    segment_ = entry;
    result_.transcript = entry;
    last_observation_ = first.text;
    valid_ = first.valid_actions;
    knowledge_.observe(first.text);
    try {
      switch (strategy_) {
        case Strategy::kRandom: run_random(); break;
        case Strategy::kActionGen: run_action_gen(); break;
        case Strategy::kPddlGen:
        case Strategy::kPddlEdit: run_pddl(); break;
      }
    } catch (const BudgetExceeded&) {
      fail("budget-exceeded");
    }
    result_.steps = env_.steps_taken();
    result_.success = env_.outcome() == envs::Outcome::kSuccess;
    if (result_.success) {
      result_.failure_reason.clear();
    } else if (result_.failure_reason.empty()) {
      result_.failure_reason = failure_label(env_.outcome() == envs::Outcome::kFailure ? failure_reason_ : "stopped");
    }
    if (problem_) result_.final_problem = pddl::print_problem(*problem_);
    return std::move(result_);
  }

 private:
  bool ongoing() const { return env_.outcome() == envs::Outcome::kOngoing; }

  void fail(std::string reason) {
    if (result_.failure_reason.empty()) result_.failure_reason = std::move(reason);
  }

  envs::StepResult execute(const std::string& command, ordered_json* record) {
    auto r = env_.step(command);
    const std::string entry = envs::transcript_entry(command, r.observation.text);
    segment_ += entry;
    result_.transcript += entry;
    if (r.status == envs::StepStatus::kInvalid) ++result_.invalid_steps;
    if (!r.observation.ongoing()) failure_reason_ = r.observation.failure_reason;
    knowledge_.observe(r.observation.text);
    last_observation_ = r.observation.text;
    valid_ = r.observation.valid_actions;
    history_.push_back(entry);
    if (record) {
      (*record)["commands"].push_back(command);
      (*record)["observations"].push_back(r.observation.text);
    }
    return r;
  }

  bool valid(const std::string& command) const {
    return std::find(valid_.begin(), valid_.end(), command) != valid_.end();
  }

  void run_random() {
    envs::Rng rng(envs::mix_seed({config_.seed, 0x7a4d}));
    while (ongoing()) {
      ++result_.iterations;
      ordered_json record{{"iteration", result_.iterations}, {"commands", ordered_json::array()},
                          {"observations", ordered_json::array()}};
      const std::string command = rng.choice(valid_);
      execute(command, &record);
      result_.trace.push_back(std::move(record));
    }
  }

  void run_action_gen() {
    if (!translator_) throw PreconditionViolation("action-gen needs a translator");
    while (ongoing()) {
      ++result_.iterations;
      ordered_json record{{"iteration", result_.iterations}, {"commands", ordered_json::array()},
                          {"observations", ordered_json::array()}, {"errors", ordered_json::array()}};
      translator::TranslatorRequest request;
      request.mode = translator::Mode::kAction;
      request.env = env_.kind();
      request.observation = last_observation_;
      request.history.assign(history_.begin(), history_.end());
      request.valid_actions = valid_;
      std::optional<std::string> command;
      int attempt = 0;
      for (; attempt <= config_.max_retries && !command; ++attempt) {
        try {
          ++result_.translator_calls;
          command = translator_->translate(request).text;
        } catch (const BudgetExceeded&) {
          throw;
        } catch (const Error& e) {
          record["errors"].push_back(e.what());
        }
      }
      result_.retries.push_back(attempt - 1);
      record["retries"] = attempt - 1;
      if (!command) {
        result_.trace.push_back(std::move(record));
        fail("retries-exhausted");
        return;
      }
      execute(command->empty() ? "look around" : *command, &record);
      result_.trace.push_back(std::move(record));
    }
  }

  /// Issues the hard-coded actions that need no planning.
  std::size_t mechanical(ordered_json& record) {
    std::size_t issued = 0;
    for (int i = 0; i < config_.max_mechanical && ongoing(); ++i) {
      std::optional<std::string> pick;
      if (env_.kind() == envs::EnvKind::kCoin) {
        if (valid("take coin")) pick = "take coin";
      } else {
        if (valid("eat meal")) pick = "eat meal";
        else if (valid("prepare meal")) pick = "prepare meal";
        else if (!knowledge_.recipe && valid("examine cookbook")) pick = "examine cookbook";
        if (!pick)
          for (const auto& n : needed_items(knowledge_))
            if (!knowledge_.held.count(n) && valid("take " + n)) {
              pick = "take " + n;
              break;
            }
        if (!pick && knowledge_.recipe && some_needed_unlocated(knowledge_))
          for (const auto& a : valid_)
            if (a.rfind("open ", 0) == 0 && a.rfind("open door to ", 0) != 0) {
              pick = a;
              break;
            }
      }
      if (!pick) break;
      record["mechanical"].push_back(*pick);
      execute(*pick, &record);
      ++issued;
    }
    return issued;
  }

  ProblemFile accept(const translator::TranslatorResponse& response, translator::Mode mode) const {
    const auto& domain = domain_for(env_.kind());
    ProblemFile candidate;
    if (mode == translator::Mode::kDelta) {
      const auto delta = edit::parse_delta_json(response.text);
      if (edit::deletes_visited(delta)) throw MalformedDelta("edit deletes a visited fact");
      candidate = edit::apply_delta(*problem_, delta).problem;
    } else {
      candidate = pddl::parse_problem(response.text);
      if (problem_)
        for (const auto& v : problem_->facts("visited"))
          if (!candidate.init.count(v)) throw MalformedDelta("regenerated problem drops " + pddl::to_string(v));
    }
    candidate.goal = Condition::all({});
    const auto diags = pddl::validate_problem(candidate, domain);
    if (!diags.empty()) throw UndeclaredObject("invalid problem: " + diags.front().message);
    if (candidate.facts("at").size() != 1) throw MalformedDelta("problem must have exactly one at fact");
    return candidate;
  }

  Planned plan(ProblemFile candidate) const {
    const auto& domain = domain_for(env_.kind());
    for (const auto& sub : stack_) {
      auto goal = sub.build(candidate, knowledge_);
      if (!goal) continue;
      const ProblemFile problem = edit::set_goal(candidate, *goal);
      const auto task = planner::ground(domain, problem, config_.grounding_cap);
      auto solved = planner::solve(task, config_.limits);
      if (!solved.found()) continue;
      planner::Plan steps = solved.plan;
      if (knowledge_.recipe) steps = order_plan(steps, *knowledge_.recipe);
      if (!planner::validate_plan(task, steps).ok) continue;
      Planned out{problem, sub.name, *goal, steps, {}};
      for (const auto& a : steps.steps) out.commands.push_back(ground_action_to_command(a, problem));
      return out;
    }
    throw Error("no sub-goal has a plan");
  }

  void run_pddl() {
    if (!translator_) throw PreconditionViolation("pddl strategies need a translator");
    while (ongoing()) {
      ++result_.iterations;
      ordered_json record{{"iteration", result_.iterations}, {"mechanical", ordered_json::array()},
                          {"commands", ordered_json::array()}, {"observations", ordered_json::array()},
                          {"errors", ordered_json::array()}};
      std::size_t issued = mechanical(record);
      if (!ongoing()) {
        result_.trace.push_back(std::move(record));
        break;
      }
      const auto mode = strategy_ == Strategy::kPddlEdit && problem_ ? translator::Mode::kDelta
                                                                     : translator::Mode::kInitProblem;
      translator::TranslatorRequest request;
      request.mode = mode;
      request.env = env_.kind();
      request.observation = segment_;
      if (problem_) request.prior_problem = pddl::print_problem(*problem_);

      std::optional<Planned> planned;
      int attempt = 0;
      for (; attempt <= config_.max_retries && !planned; ++attempt) {
        try {
          ++result_.translator_calls;
          const auto response = translator_->translate(request);
          planned = plan(accept(response, mode));
        } catch (const BudgetExceeded&) {
          throw;
        } catch (const Error& e) {
          record["errors"].push_back(e.what());
        }
      }
      result_.retries.push_back(attempt - 1);
      record["retries"] = attempt - 1;
      if (!planned) {
        result_.trace.push_back(std::move(record));
        fail("retries-exhausted");
        return;
      }
      problem_ = planned->problem;
      segment_.clear();
      result_.visited_per_iteration.push_back(problem_->facts("visited").size());
      record["problem"] = pddl::print_problem(*problem_);
      record["goal_name"] = planned->goal_name;
      record["goal"] = pddl::to_string(planned->goal);
      record["plan"] = ordered_json::array();
      for (const auto& a : planned->plan.steps) record["plan"].push_back(a.to_string());

      for (const auto& command : planned->commands) {
        const auto r = execute(command, &record);
        ++issued;
        if (r.status == envs::StepStatus::kInvalid || !ongoing()) break;
      }
      result_.trace.push_back(std::move(record));
      if (issued == 0 && ongoing()) {
        fail("stuck");
        return;
      }
    }
  }

  envs::Environment& env_;
  Strategy strategy_;
  translator::Translator* translator_;
  EpisodeConfig config_;
  SubGoalStack stack_ = build_subgoals(env_.kind());
  Knowledge knowledge_;
  EpisodeResult result_;
  std::optional<ProblemFile> problem_;
  std::string segment_;
  std::string last_observation_;
  std::string failure_reason_;
  std::vector<std::string> valid_;
  std::vector<std::string> history_;
};

}  // namespace

const char* to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kActionGen: return "action-gen";
    case Strategy::kPddlGen: return "pddl-gen";
    case Strategy::kPddlEdit: return "pddl-edit";
    case Strategy::kRandom: return "random";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  for (auto s : {Strategy::kActionGen, Strategy::kPddlGen, Strategy::kPddlEdit, Strategy::kRandom})
    if (text == to_string(s)) return s;
  throw Error("unknown strategy: " + std::string(text));
}

void Knowledge::observe(std::string_view observation) {
  using Kind = translator::ObservationView::Kind;
  translator::ObservationView view;
  try {
    view = translator::read_observation(observation);
  } catch (const UnrecognizedObservation&) {
    return;
  }
  switch (view.kind) {
    case Kind::kRoom:
      if (view.room.coin) coin_room = envs::to_identifier(view.room.room);
      for (const auto& f : view.room.furniture) {
        if (f.kind == envs::FurnitureKind::kContainer && f.open) opened.insert(f.name);
        seen_items.insert(f.items.begin(), f.items.end());
      }
      break;
    case Kind::kContainerOpened:
      opened.insert(view.target);
      seen_items.insert(view.items.begin(), view.items.end());
      break;
    case Kind::kTaken: held.insert(view.target); break;
    case Kind::kRecipe: recipe = view.recipe; break;
    default: break;
  }
}

SubGoalStack build_subgoals(envs::EnvKind env) {
  if (env == envs::EnvKind::kCoin) return {{"reach-coin", reach_coin}, {"explore", explore}};
  return {{"recipe-complete", recipe_complete},
          {"read-recipe", read_recipe},
          {"reach-items", reach_items},
          {"explore", explore},
          {"search-containers", search_containers}};
}

const pddl::DomainFile& domain_for(envs::EnvKind env) {
  static const pddl::DomainFile coin = pddl::parse_domain(resource("coin-domain.pddl"));
  static const pddl::DomainFile cooking = pddl::parse_domain(resource("cooking-domain.pddl"));
  return env == envs::EnvKind::kCoin ? coin : cooking;
}

std::string ground_action_to_command(const planner::GroundAction& action, const pddl::ProblemFile& problem) {
  const auto& a = action.args;
  auto direction = [&](const std::string& from, const std::string& to) {
    for (const auto& f : problem.facts("connected"))
      if (f.args[0] == from && f.args[1] == to) return f.args[2];
    throw MissingDirection("no connected fact from " + from + " to " + to);
  };
  if (action.name == "move" && a.size() == 3) {
    direction(a[0], a[1]);
    return "move " + a[2];
  }
  if (action.name == "open_door" && a.size() == 2) return "open door to " + direction(a[0], a[1]);
  if (is_knife_action(action.name) && !a.empty()) return action.name + " " + envs::from_identifier(a[0]);
  if (is_cook_action(action.name) && a.size() == 3)
    return "cook " + envs::from_identifier(a[0]) + " in " + envs::from_identifier(a[2]);
  throw Error("no command for action " + action.to_string());
}

planner::Plan order_plan(const planner::Plan& plan, const envs::Recipe& recipe) {
  auto needs_knife = [&](const std::string& id) {
    const auto* item = recipe.find(envs::from_identifier(id));
    return item && item->knife != envs::KnifeStep::kNone;
  };
  std::vector<bool> emitted(plan.steps.size(), false);
  planner::Plan out;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    if (emitted[i]) continue;
    const auto& step = plan.steps[i];
    if (is_cook_action(step.name) && !step.args.empty() && needs_knife(step.args[0]))
      for (std::size_t j = i + 1; j < plan.steps.size(); ++j)
        if (!emitted[j] && is_knife_action(plan.steps[j].name) && plan.steps[j].args[0] == step.args[0]) {
          out.steps.push_back(plan.steps[j]);
          emitted[j] = true;
        }
    out.steps.push_back(step);
    emitted[i] = true;
  }
  return out;
}

int EpisodeResult::total_retries() const {
  int total = 0;
  for (int r : retries) total += r;
  return total;
}

EpisodeResult run_episode(envs::Environment& env, Strategy strategy, translator::Translator* translator,
                          const EpisodeConfig& config) {
  return Episode(env, strategy, translator, config).run();
}

std::string trace_jsonl(const EpisodeResult& result) {
  std::string out;
  for (const auto& record : result.trace) out += record.dump() + "\n";
  return out;
}

}  // namespace pddlego::agent
