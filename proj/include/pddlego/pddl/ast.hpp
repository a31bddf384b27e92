#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pddlego::pddl {

/// Root of the type hierarchy; every declared type is (transitively) below it.
inline constexpr std::string_view kRootType = "object";

/// `name - type`, used for objects and for schema parameters (name starts with `?`).
struct TypedName {
  std::string name;
  std::string type;

  bool operator==(const TypedName&) const = default;
};

/// Objects are ordered by (type, name); this is the canonical print order.
inline bool operator<(const TypedName& a, const TypedName& b) {
  if (a.type != b.type) return a.type < b.type;
  return a.name < b.name;
}

struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  bool operator==(const Atom&) const = default;
  auto operator<=>(const Atom&) const = default;

  bool is_ground() const;
  /// True if any argument equals `name`.
  bool mentions(std::string_view name) const;
};

inline bool is_variable(std::string_view token) { return !token.empty() && token.front() == '?'; }

/// Negation-normal-form condition tree. `not` wraps atoms only.
struct Condition {
  enum class Kind { kAtom, kNot, kAnd, kOr };

  Kind kind = Kind::kAnd;
  Atom atom;                      // kAtom
  std::vector<Condition> children;  // kNot (exactly one), kAnd, kOr

  static Condition of(Atom a);
  static Condition negation(Atom a);
  static Condition all(std::vector<Condition> parts);
  static Condition any(std::vector<Condition> parts);

  /// The empty conjunction, trivially true.
  bool is_trivial() const { return kind == Kind::kAnd && children.empty(); }

  /// Every atom in the tree, in traversal order.
  void collect_atoms(std::vector<const Atom*>& out) const;

  bool operator==(const Condition&) const = default;
};

struct Literal {
  bool positive = true;
  Atom atom;

  bool operator==(const Literal&) const = default;
};

struct TypeDecl {
  std::string name;
  std::string parent{kRootType};

  bool operator==(const TypeDecl&) const = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;

  bool operator==(const PredicateDecl&) const = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  Condition precondition;
  std::vector<Literal> effect;

  bool operator==(const ActionSchema&) const = default;
};

struct DomainFile {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypeDecl> types;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> actions;

  const PredicateDecl* find_predicate(std::string_view name) const;
  const ActionSchema* find_action(std::string_view name) const;
  bool has_type(std::string_view type) const;
  /// Reflexive-transitive subtype test; everything is a subtype of the root.
  bool is_subtype(std::string_view type, std::string_view ancestor) const;

  bool operator==(const DomainFile&) const = default;
};

/// A problem file. Objects and init have set semantics; the goal is kept as written.
struct ProblemFile {
  std::string name;
  std::string domain_name;
  std::set<TypedName> objects;
  std::set<Atom> init;
  Condition goal;

  std::optional<std::string> type_of(std::string_view object) const;
  bool has_object(std::string_view object) const { return type_of(object).has_value(); }
  /// Objects of exactly this type, sorted by name.
  std::vector<std::string> objects_of_type(std::string_view type) const;
  /// Init atoms with this predicate, in canonical order.
  std::vector<Atom> facts(std::string_view predicate) const;

  bool operator==(const ProblemFile&) const = default;
};

/// The requirement flags accepted by the parser.
const std::vector<std::string>& supported_requirements();

}  // namespace pddlego::pddl
