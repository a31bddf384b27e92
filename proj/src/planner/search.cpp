#include "pddlego/planner/search.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "pddlego/pddl/printer.hpp"

namespace pddlego::planner {
namespace {

using Kind = GroundCondition::Kind;
using Words = std::vector<std::uint64_t>;

struct WordsHash {
  std::size_t operator()(const Words& w) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint64_t x : w) {
      h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

bool test(const Words& s, std::uint32_t bit) { return (s[bit >> 6] >> (bit & 63)) & 1U; }
void set(Words& s, std::uint32_t bit) { s[bit >> 6] |= std::uint64_t{1} << (bit & 63); }
void clear(Words& s, std::uint32_t bit) { s[bit >> 6] &= ~(std::uint64_t{1} << (bit & 63)); }

bool holds(const GroundCondition& c, const Words& s) {
  switch (c.kind) {
    case Kind::kTrue: return true;
    case Kind::kFalse: return false;
    case Kind::kFact: return test(s, c.fact);
    case Kind::kNotFact: return !test(s, c.fact);
    case Kind::kAnd:
      for (const auto& child : c.children)
        if (!holds(child, s)) return false;
      return true;
    case Kind::kOr:
      for (const auto& child : c.children)
        if (holds(child, s)) return true;
      return false;
  }
  return false;
}

/// Folds facts that no action changes into constants.
GroundCondition fold_static(const GroundCondition& c, const std::vector<bool>& fluent, const std::vector<bool>& init) {
  GroundCondition out;
  switch (c.kind) {
    case Kind::kTrue:
    case Kind::kFalse:
      return c;
    case Kind::kFact:
    case Kind::kNotFact: {
      if (fluent[c.fact]) return c;
      bool value = init[c.fact] == (c.kind == Kind::kFact);
      out.kind = value ? Kind::kTrue : Kind::kFalse;
      return out;
    }
    case Kind::kAnd:
    case Kind::kOr: {
      const bool is_and = c.kind == Kind::kAnd;
      out.kind = c.kind;
      for (const auto& child : c.children) {
        GroundCondition f = fold_static(child, fluent, init);
        if (f.kind == (is_and ? Kind::kTrue : Kind::kFalse)) continue;
        if (f.kind == (is_and ? Kind::kFalse : Kind::kTrue)) {
          out.kind = f.kind;
          out.children.clear();
          return out;
        }
        out.children.push_back(std::move(f));
      }
      if (out.children.empty()) out.kind = is_and ? Kind::kTrue : Kind::kFalse;
      return out;
    }
  }
  return out;
}

void mentioned(const GroundCondition& c, std::vector<FactId>& out) {
  if (c.kind == Kind::kFact || c.kind == Kind::kNotFact) out.push_back(c.fact);
  for (const auto& child : c.children) mentioned(child, out);
}

void remap(GroundCondition& c, const std::vector<std::int64_t>& bit_of) {
  if (c.kind == Kind::kFact || c.kind == Kind::kNotFact) c.fact = static_cast<FactId>(bit_of[c.fact]);
  for (auto& child : c.children) remap(child, bit_of);
}

/// Number of unsatisfied top-level conjuncts.
std::size_t goal_count(const GroundCondition& goal, const Words& s) {
  if (goal.kind != Kind::kAnd) return holds(goal, s) ? 0 : 1;
  std::size_t n = 0;
  for (const auto& child : goal.children) n += holds(child, s) ? 0 : 1;
  return n;
}

struct CompiledAction {
  std::size_t task_index;
  GroundCondition pre;
  std::vector<std::uint32_t> add;
  std::vector<std::uint32_t> del;
};

/// The search-ready view of a task: relevant fluent facts packed into bits.
struct Compiled {
  std::vector<CompiledAction> actions;
  GroundCondition goal;
  Words init;
  bool goal_unreachable = false;
};

Compiled compile(const GroundTask& task) {
  const std::size_t n = task.facts.size();
  std::vector<bool> fluent(n, false);
  for (const auto& a : task.actions) {
    for (FactId f : a.add) fluent[f] = true;
    for (FactId f : a.del) fluent[f] = true;
  }
  const std::vector<bool> init = task.initial_state();

  Compiled out;
  GroundCondition goal = fold_static(task.goal_compiled, fluent, init);
  if (goal.kind == Kind::kFalse) out.goal_unreachable = true;

  std::vector<GroundCondition> pre(task.actions.size());
  std::vector<bool> applicable(task.actions.size(), false);
  for (std::size_t i = 0; i < task.actions.size(); ++i) {
    pre[i] = fold_static(task.actions[i].compiled, fluent, init);
    applicable[i] = pre[i].kind != Kind::kFalse;
  }

  // Backward relevance: keep actions whose effects touch a fact that the goal
  // or an already kept precondition mentions.
  std::vector<bool> relevant(n, false);
  std::vector<FactId> buffer;
  mentioned(goal, buffer);
  for (FactId f : buffer) relevant[f] = true;
  std::vector<bool> kept(task.actions.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < task.actions.size(); ++i) {
      if (kept[i] || !applicable[i]) continue;
      const auto& a = task.actions[i];
      bool touches = std::any_of(a.add.begin(), a.add.end(), [&](FactId f) { return relevant[f]; }) ||
                     std::any_of(a.del.begin(), a.del.end(), [&](FactId f) { return relevant[f]; });
      if (!touches) continue;
      kept[i] = true;
      changed = true;
      buffer.clear();
      mentioned(pre[i], buffer);
      for (FactId f : buffer) relevant[f] = true;
    }
  }

  std::vector<std::int64_t> bit_of(n, -1);
  std::uint32_t bits = 0;
  for (std::size_t f = 0; f < n; ++f)
    if (relevant[f] && fluent[f]) bit_of[f] = bits++;
  const std::size_t words = std::max<std::size_t>(1, (bits + 63) / 64);

  out.init.assign(words, 0);
  for (std::size_t f = 0; f < n; ++f)
    if (bit_of[f] >= 0 && init[f]) set(out.init, static_cast<std::uint32_t>(bit_of[f]));
  remap(goal, bit_of);
  out.goal = std::move(goal);

  for (std::size_t i = 0; i < task.actions.size(); ++i) {
    if (!kept[i]) continue;
    CompiledAction ca{i, std::move(pre[i]), {}, {}};
    remap(ca.pre, bit_of);
    for (FactId f : task.actions[i].add)
      if (bit_of[f] >= 0) ca.add.push_back(static_cast<std::uint32_t>(bit_of[f]));
    for (FactId f : task.actions[i].del)
      if (bit_of[f] >= 0) ca.del.push_back(static_cast<std::uint32_t>(bit_of[f]));
    out.actions.push_back(std::move(ca));
  }
  return out;
}

struct Node {
  std::uint32_t parent;
  std::uint32_t action;  // index into Compiled::actions
};

constexpr std::uint32_t kNoParent = UINT32_MAX;

Plan extract(const GroundTask& task, const Compiled& compiled, const std::vector<Node>& nodes, std::uint32_t id) {
  Plan plan;
  while (nodes[id].parent != kNoParent) {
    plan.steps.push_back(task.actions[compiled.actions[nodes[id].action].task_index]);
    id = nodes[id].parent;
  }
  std::reverse(plan.steps.begin(), plan.steps.end());
  return plan;
}

/// First literal of `c` that fails in `state`, rendered for humans.
std::string first_failure(const pddl::Condition& c, const GroundTask& task, const std::vector<bool>& state) {
  using CK = pddl::Condition::Kind;
  auto value = [&](const pddl::Atom& atom) {
    auto id = task.find(atom);
    return id && state[*id];
  };
  switch (c.kind) {
    case CK::kAtom:
      return value(c.atom) ? "" : pddl::to_string(c);
    case CK::kNot:
      return value(c.children.front().atom) ? pddl::to_string(c) : "";
    case CK::kAnd:
      for (const auto& child : c.children) {
        std::string r = first_failure(child, task, state);
        if (!r.empty()) return r;
      }
      return "";
    case CK::kOr:
      for (const auto& child : c.children)
        if (first_failure(child, task, state).empty()) return "";
      return pddl::to_string(c);
  }
  return "";
}

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kPlan: return "plan";
    case SolveStatus::kUnsolvable: return "unsolvable";
    case SolveStatus::kResourceExhausted: return "resource-exhausted";
  }
  return "?";
}

SolveResult solve(const GroundTask& task, const SearchLimits& limits) {
  using Clock = std::chrono::steady_clock;
  const auto deadline = Clock::now() + limits.timeout;
  SolveResult result;
  const Compiled compiled = compile(task);
  if (compiled.goal_unreachable) return result;

  std::vector<Node> nodes{{kNoParent, 0}};
  std::vector<Words> states{compiled.init};
  std::unordered_map<Words, std::uint32_t, WordsHash> seen{{compiled.init, 0}};
  if (holds(compiled.goal, compiled.init)) {
    result.status = SolveStatus::kPlan;
    return result;
  }

  const bool greedy = limits.mode == SearchLimits::Mode::kGreedyGoalCount;
  using Entry = std::pair<std::size_t, std::uint32_t>;  // (heuristic, node id); ties by creation order
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::size_t head = 0;  // BFS frontier is nodes[head..] in creation order
  if (greedy) open.emplace(goal_count(compiled.goal, compiled.init), 0);

  for (;;) {
    std::uint32_t id;
    if (greedy) {
      if (open.empty()) return result;
      id = open.top().second;
      open.pop();
    } else {
      if (head >= nodes.size()) return result;
      id = static_cast<std::uint32_t>(head++);
    }
    if (result.expansions >= limits.max_expansions ||
        ((result.expansions & 255) == 0 && Clock::now() > deadline)) {
      result.status = SolveStatus::kResourceExhausted;
      return result;
    }
    ++result.expansions;
    for (std::uint32_t a = 0; a < compiled.actions.size(); ++a) {
      const CompiledAction& action = compiled.actions[a];
      if (!holds(action.pre, states[id])) continue;
      Words next = states[id];
      for (auto bit : action.del) clear(next, bit);
      for (auto bit : action.add) set(next, bit);
      if (seen.count(next)) continue;
      const auto next_id = static_cast<std::uint32_t>(nodes.size());
      seen.emplace(next, next_id);
      nodes.push_back({id, a});
      ++result.generated;
      if (holds(compiled.goal, next)) {
        result.status = SolveStatus::kPlan;
        result.plan = extract(task, compiled, nodes, next_id);
        return result;
      }
      if (greedy) open.emplace(goal_count(compiled.goal, next), next_id);
      states.push_back(std::move(next));
    }
  }
}

PlanCheck validate_plan(const GroundTask& task, const Plan& plan) {
  std::vector<bool> state = task.initial_state();
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const GroundAction& step = plan.steps[i];
    if (!step.compiled.holds(state)) {
      std::string failed = first_failure(step.precondition, task, state);
      return {false, i, "precondition " + failed + " of " + step.to_string() + " does not hold"};
    }
    for (FactId f : step.del) state[f] = false;
    for (FactId f : step.add) state[f] = true;
  }
  if (!task.goal_compiled.holds(state))
    return {false, plan.steps.size(), "goal " + pddl::to_string(task.goal) + " does not hold after the plan"};
  return {};
}

std::string format_plan(const Plan& plan) {
  std::ostringstream out;
  for (const auto& step : plan.steps) out << step.to_string() << "\n";
  return out.str();
}

}  // namespace pddlego::planner
