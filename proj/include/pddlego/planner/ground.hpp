#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pddlego/pddl/ast.hpp"

namespace pddlego::planner {

using FactId = std::uint32_t;

/// A ground condition over fact ids. Closed world: kNotFact holds iff the
/// fact is absent from the state.
struct GroundCondition {
  enum class Kind { kTrue, kFalse, kFact, kNotFact, kAnd, kOr };

  Kind kind = Kind::kTrue;
  FactId fact = 0;
  std::vector<GroundCondition> children;

  bool holds(const std::vector<bool>& state) const;
};

struct GroundAction {
  std::string name;
  std::vector<std::string> args;
  pddl::Condition precondition;  // ground, for display and diagnostics
  GroundCondition compiled;
  std::vector<FactId> add;  // sorted, disjoint from del
  std::vector<FactId> del;  // sorted

  /// `(name arg1 arg2 ...)`, the conventional planner output form.
  std::string to_string() const;
};

/// The propositional task produced by grounding a domain/problem pair.
struct GroundTask {
  std::vector<pddl::Atom> facts;
  std::map<pddl::Atom, FactId> fact_index;
  std::vector<GroundAction> actions;  // sorted by (name, args)
  std::vector<FactId> init;           // sorted
  pddl::Condition goal;
  GroundCondition goal_compiled;

  std::optional<FactId> find(const pddl::Atom& atom) const;
  /// Dense boolean state with the init facts set.
  std::vector<bool> initial_state() const;
};

inline constexpr std::size_t kDefaultGroundingCap = 1'000'000;

/// Instantiates every schema with every type-consistent tuple of distinct
/// objects. The problem should validate cleanly against the domain first.
/// Throws GroundingExplosion when the instance count would exceed `cap`.
GroundTask ground(const pddl::DomainFile& domain, const pddl::ProblemFile& problem,
                  std::size_t cap = kDefaultGroundingCap);

}  // namespace pddlego::planner
