#include "pddlego/pddl/validate.hpp"

#include <map>

#include "pddlego/pddl/printer.hpp"

namespace pddlego::pddl {
namespace {

void check_atom(const Atom& atom, const ProblemFile& problem, const DomainFile& domain, const char* where,
                std::vector<Diagnostic>& out) {
  using Kind = Diagnostic::Kind;
  const std::string shown = to_string(atom) + " in " + where;
  const PredicateDecl* decl = domain.find_predicate(atom.predicate);
  if (decl == nullptr) {
    out.push_back({Kind::kUnknownPredicate, "unknown predicate " + shown});
    return;
  }
  if (decl->params.size() != atom.args.size()) {
    out.push_back({Kind::kArityMismatch, "expected " + std::to_string(decl->params.size()) + " arguments, got " +
                                             std::to_string(atom.args.size()) + ": " + shown});
    return;
  }
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    const std::string& arg = atom.args[i];
    if (is_variable(arg)) {
      out.push_back({Kind::kNonGroundInit, "variable " + arg + " in " + shown});
      continue;
    }
    auto type = problem.type_of(arg);
    if (!type) {
      out.push_back({Kind::kUndeclaredObject, "undeclared object " + arg + " in " + shown});
      continue;
    }
    if (!domain.is_subtype(*type, decl->params[i].type))
      out.push_back({Kind::kTypeMismatch, arg + " is a " + *type + ", expected " + decl->params[i].type + ": " + shown});
  }
}

}  // namespace

const char* to_string(Diagnostic::Kind kind) {
  switch (kind) {
    case Diagnostic::Kind::kUndeclaredObject: return "UndeclaredObject";
    case Diagnostic::Kind::kUnknownPredicate: return "UnknownPredicate";
    case Diagnostic::Kind::kArityMismatch: return "ArityMismatch";
    case Diagnostic::Kind::kTypeMismatch: return "TypeMismatch";
    case Diagnostic::Kind::kNonGroundInit: return "NonGroundInit";
  }
  return "?";
}

std::vector<Diagnostic> validate_problem(const ProblemFile& problem, const DomainFile& domain) {
  std::vector<Diagnostic> out;
  std::map<std::string, std::string> seen;
  for (const auto& o : problem.objects) {
    if (!domain.has_type(o.type))
      out.push_back({Diagnostic::Kind::kTypeMismatch, "object " + o.name + " has undeclared type " + o.type});
    auto [it, inserted] = seen.emplace(o.name, o.type);
    if (!inserted)
      out.push_back({Diagnostic::Kind::kTypeMismatch,
                     "object " + o.name + " declared as both " + it->second + " and " + o.type});
  }
  for (const auto& atom : problem.init) check_atom(atom, problem, domain, "init", out);
  std::vector<const Atom*> goal_atoms;
  problem.goal.collect_atoms(goal_atoms);
  for (const Atom* atom : goal_atoms) check_atom(*atom, problem, domain, "goal", out);
  return out;
}

}  // namespace pddlego::pddl
