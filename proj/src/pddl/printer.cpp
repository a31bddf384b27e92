#include "pddlego/pddl/printer.hpp"

#include <sstream>

namespace pddlego::pddl {
namespace {

std::string typed_list(const std::vector<TypedName>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ' ';
    out += names[i].name + " - " + names[i].type;
  }
  return out;
}

std::string effect_string(const std::vector<Literal>& effect) {
  auto literal = [](const Literal& l) {
    return l.positive ? to_string(l.atom) : "(not " + to_string(l.atom) + ")";
  };
  if (effect.size() == 1) return literal(effect.front());
  std::string out = "(and";
  for (const auto& l : effect) out += ' ' + literal(l);
  return out + ")";
}

}  // namespace

std::string to_string(const Atom& atom) {
  std::string out = "(" + atom.predicate;
  for (const auto& a : atom.args) out += ' ' + a;
  return out + ")";
}

std::string to_string(const TypedName& object) { return object.name + " - " + object.type; }

std::string to_string(const Condition& condition) {
  switch (condition.kind) {
    case Condition::Kind::kAtom:
      return to_string(condition.atom);
    case Condition::Kind::kNot:
      return "(not " + to_string(condition.children.front()) + ")";
    case Condition::Kind::kAnd:
    case Condition::Kind::kOr: {
      std::string out = condition.kind == Condition::Kind::kAnd ? "(and" : "(or";
      for (const auto& c : condition.children) out += ' ' + to_string(c);
      return out + ")";
    }
  }
  return {};
}

std::string print_problem(const ProblemFile& problem) {
  std::ostringstream out;
  out << "(define (problem " << problem.name << ")\n";
  if (!problem.domain_name.empty()) out << "  (:domain " << problem.domain_name << ")\n";
  out << "  (:objects\n";
  for (const auto& o : problem.objects) out << "    " << to_string(o) << "\n";
  out << "  )\n";
  out << "  (:init\n";
  for (const auto& a : problem.init) out << "    " << to_string(a) << "\n";
  out << "  )\n";
  out << "  (:goal " << to_string(problem.goal) << ")\n";
  out << ")\n";
  return out.str();
}

std::string print_domain(const DomainFile& domain) {
  std::ostringstream out;
  out << "(define (domain " << domain.name << ")\n";
  if (!domain.requirements.empty()) {
    out << "  (:requirements";
    for (const auto& r : domain.requirements) out << ' ' << r;
    out << ")\n";
  }
  if (!domain.types.empty()) {
    out << "  (:types\n";
    for (const auto& t : domain.types) {
      out << "    " << t.name;
      if (t.parent != kRootType) out << " - " << t.parent;
      out << "\n";
    }
    out << "  )\n";
  }
  if (!domain.predicates.empty()) {
    out << "  (:predicates\n";
    for (const auto& p : domain.predicates) {
      out << "    (" << p.name;
      if (!p.params.empty()) out << ' ' << typed_list(p.params);
      out << ")\n";
    }
    out << "  )\n";
  }
  for (const auto& a : domain.actions) {
    out << "\n  (:action " << a.name << "\n";
    out << "    :parameters (" << typed_list(a.params) << ")\n";
    out << "    :precondition " << to_string(a.precondition) << "\n";
    out << "    :effect " << effect_string(a.effect) << "\n";
    out << "  )\n";
  }
  out << ")\n";
  return out.str();
}

}  // namespace pddlego::pddl
