#include "pddlego/planner/ground.hpp"

#include <algorithm>
#include <unordered_map>

#include "pddlego/error.hpp"
#include "pddlego/pddl/printer.hpp"

namespace pddlego::planner {
namespace {

using pddl::Atom;
using pddl::Condition;

class Grounder {
 public:
  Grounder(const pddl::DomainFile& domain, const pddl::ProblemFile& problem, GroundTask& task)
      : domain_(domain), problem_(problem), task_(task) {}

  FactId intern(const Atom& atom) {
    auto [it, inserted] = task_.fact_index.emplace(atom, static_cast<FactId>(task_.facts.size()));
    if (inserted) task_.facts.push_back(atom);
    return it->second;
  }

  Atom substitute(const Atom& atom, const std::unordered_map<std::string, std::string>& binding) const {
    Atom out = atom;
    for (auto& arg : out.args) {
      auto it = binding.find(arg);
      if (it != binding.end()) arg = it->second;
    }
    return out;
  }

  Condition substitute(const Condition& c, const std::unordered_map<std::string, std::string>& binding) const {
    Condition out = c;
    if (c.kind == Condition::Kind::kAtom) {
      out.atom = substitute(c.atom, binding);
      return out;
    }
    for (auto& child : out.children) child = substitute(child, binding);
    return out;
  }

  GroundCondition compile(const Condition& c) {
    GroundCondition g;
    switch (c.kind) {
      case Condition::Kind::kAtom:
        g.kind = GroundCondition::Kind::kFact;
        g.fact = intern(c.atom);
        break;
      case Condition::Kind::kNot:
        g.kind = GroundCondition::Kind::kNotFact;
        g.fact = intern(c.children.front().atom);
        break;
      case Condition::Kind::kAnd:
      case Condition::Kind::kOr:
        g.kind = c.kind == Condition::Kind::kAnd ? GroundCondition::Kind::kAnd : GroundCondition::Kind::kOr;
        for (const auto& child : c.children) g.children.push_back(compile(child));
        break;
    }
    return g;
  }

  std::vector<std::vector<std::string>> candidates(const pddl::ActionSchema& schema) const {
    std::vector<std::vector<std::string>> out;
    for (const auto& param : schema.params) {
      std::vector<std::string> names;
      for (const auto& o : problem_.objects)
        if (domain_.is_subtype(o.type, param.type)) names.push_back(o.name);
      std::sort(names.begin(), names.end());
      names.erase(std::unique(names.begin(), names.end()), names.end());
      out.push_back(std::move(names));
    }
    return out;
  }

  void check_budget(const std::vector<std::vector<std::string>>& cands, std::size_t cap) {
    // Upper bound ignoring the distinctness filter.
    double bound = 1.0;
    for (const auto& c : cands) bound *= static_cast<double>(c.size());
    budget_used_ += bound;
    if (budget_used_ > static_cast<double>(cap))
      throw GroundingExplosion("grounding would exceed " + std::to_string(cap) + " action instances");
  }

  void instantiate(const pddl::ActionSchema& schema, const std::vector<std::vector<std::string>>& cands) {
    std::vector<std::string> chosen;
    chosen.reserve(cands.size());
    recurse(schema, cands, chosen);
  }

 private:
  void recurse(const pddl::ActionSchema& schema, const std::vector<std::vector<std::string>>& cands,
               std::vector<std::string>& chosen) {
    if (chosen.size() == cands.size()) {
      emit(schema, chosen);
      return;
    }
    for (const auto& name : cands[chosen.size()]) {
      if (std::find(chosen.begin(), chosen.end(), name) != chosen.end()) continue;
      chosen.push_back(name);
      recurse(schema, cands, chosen);
      chosen.pop_back();
    }
  }

  void emit(const pddl::ActionSchema& schema, const std::vector<std::string>& args) {
    std::unordered_map<std::string, std::string> binding;
    for (std::size_t i = 0; i < args.size(); ++i) binding[schema.params[i].name] = args[i];
    GroundAction action;
    action.name = schema.name;
    action.args = args;
    action.precondition = substitute(schema.precondition, binding);
    action.compiled = compile(action.precondition);
    for (const auto& lit : schema.effect) {
      FactId id = intern(substitute(lit.atom, binding));
      (lit.positive ? action.add : action.del).push_back(id);
    }
    std::sort(action.add.begin(), action.add.end());
    action.add.erase(std::unique(action.add.begin(), action.add.end()), action.add.end());
    std::sort(action.del.begin(), action.del.end());
    action.del.erase(std::unique(action.del.begin(), action.del.end()), action.del.end());
    // Add wins over delete for the same fact.
    std::vector<FactId> del;
    std::set_difference(action.del.begin(), action.del.end(), action.add.begin(), action.add.end(),
                        std::back_inserter(del));
    action.del = std::move(del);
    task_.actions.push_back(std::move(action));
  }

  const pddl::DomainFile& domain_;
  const pddl::ProblemFile& problem_;
  GroundTask& task_;
  double budget_used_ = 0.0;
};

}  // namespace

bool GroundCondition::holds(const std::vector<bool>& state) const {
  switch (kind) {
    case Kind::kTrue: return true;
    case Kind::kFalse: return false;
    case Kind::kFact: return state[fact];
    case Kind::kNotFact: return !state[fact];
    case Kind::kAnd:
      return std::all_of(children.begin(), children.end(), [&](const GroundCondition& c) { return c.holds(state); });
    case Kind::kOr:
      return std::any_of(children.begin(), children.end(), [&](const GroundCondition& c) { return c.holds(state); });
  }
  return false;
}

std::string GroundAction::to_string() const {
  std::string out = "(" + name;
  for (const auto& a : args) out += ' ' + a;
  return out + ")";
}

std::optional<FactId> GroundTask::find(const pddl::Atom& atom) const {
  auto it = fact_index.find(atom);
  if (it == fact_index.end()) return std::nullopt;
  return it->second;
}

std::vector<bool> GroundTask::initial_state() const {
  std::vector<bool> state(facts.size(), false);
  for (FactId f : init) state[f] = true;
  return state;
}

GroundTask ground(const pddl::DomainFile& domain, const pddl::ProblemFile& problem, std::size_t cap) {
  GroundTask task;
  Grounder g(domain, problem, task);
  for (const auto& atom : problem.init) task.init.push_back(g.intern(atom));
  std::sort(task.init.begin(), task.init.end());

  std::vector<const pddl::ActionSchema*> schemas;
  for (const auto& s : domain.actions) schemas.push_back(&s);
  std::sort(schemas.begin(), schemas.end(), [](auto* a, auto* b) { return a->name < b->name; });
  for (const auto* schema : schemas) {
    auto cands = g.candidates(*schema);
    g.check_budget(cands, cap);
    g.instantiate(*schema, cands);
  }
  // Candidates are name-sorted and schemas are name-sorted, so the list is
  // already in (name, args) order; the sort keeps that explicit.
  std::stable_sort(task.actions.begin(), task.actions.end(), [](const GroundAction& a, const GroundAction& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.args < b.args;
  });
  task.goal = problem.goal;
  task.goal_compiled = g.compile(problem.goal);
  return task;
}

}  // namespace pddlego::planner
