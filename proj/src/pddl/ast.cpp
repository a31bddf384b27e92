#include "pddlego/pddl/ast.hpp"

#include <algorithm>

namespace pddlego::pddl {

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(), [](const std::string& a) { return is_variable(a); });
}

bool Atom::mentions(std::string_view name) const {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) { return a == name; });
}

Condition Condition::of(Atom a) {
  Condition c;
  c.kind = Kind::kAtom;
  c.atom = std::move(a);
  return c;
}

Condition Condition::negation(Atom a) {
  Condition c;
  c.kind = Kind::kNot;
  c.children.push_back(of(std::move(a)));
  return c;
}

Condition Condition::all(std::vector<Condition> parts) {
  Condition c;
  c.kind = Kind::kAnd;
  c.children = std::move(parts);
  return c;
}

Condition Condition::any(std::vector<Condition> parts) {
  Condition c;
  c.kind = Kind::kOr;
  c.children = std::move(parts);
  return c;
}

void Condition::collect_atoms(std::vector<const Atom*>& out) const {
  if (kind == Kind::kAtom) {
    out.push_back(&atom);
    return;
  }
  for (const auto& child : children) child.collect_atoms(out);
}

const PredicateDecl* DomainFile::find_predicate(std::string_view name) const {
  for (const auto& p : predicates)
    if (p.name == name) return &p;
  return nullptr;
}

const ActionSchema* DomainFile::find_action(std::string_view name) const {
  for (const auto& a : actions)
    if (a.name == name) return &a;
  return nullptr;
}

bool DomainFile::has_type(std::string_view type) const {
  if (type == kRootType) return true;
  return std::any_of(types.begin(), types.end(), [&](const TypeDecl& t) { return t.name == type; });
}

bool DomainFile::is_subtype(std::string_view type, std::string_view ancestor) const {
  if (ancestor == kRootType || type == ancestor) return true;
  // Walk parents; the hierarchy is shallow and acyclic by construction.
  std::string_view current = type;
  for (std::size_t guard = 0; guard <= types.size(); ++guard) {
    auto it = std::find_if(types.begin(), types.end(), [&](const TypeDecl& t) { return t.name == current; });
    if (it == types.end()) return false;
    if (it->parent == ancestor) return true;
    if (it->parent == kRootType) return false;
    current = it->parent;
  }
  return false;
}

std::optional<std::string> ProblemFile::type_of(std::string_view object) const {
  for (const auto& o : objects)
    if (o.name == object) return o.type;
  return std::nullopt;
}

std::vector<std::string> ProblemFile::objects_of_type(std::string_view type) const {
  std::vector<std::string> out;
  for (const auto& o : objects)
    if (o.type == type) out.push_back(o.name);
  return out;
}

std::vector<Atom> ProblemFile::facts(std::string_view predicate) const {
  std::vector<Atom> out;
  for (const auto& a : init)
    if (a.predicate == predicate) out.push_back(a);
  return out;
}

const std::vector<std::string>& supported_requirements() {
  static const std::vector<std::string> flags = {":strips", ":typing", ":negative-preconditions",
                                                 ":disjunctive-preconditions"};
  return flags;
}

}  // namespace pddlego::pddl
