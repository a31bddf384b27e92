#pragma once

#include <string>
#include <vector>

#include "pddlego/pddl/ast.hpp"

namespace pddlego::pddl {

struct Diagnostic {
  enum class Kind { kUndeclaredObject, kUnknownPredicate, kArityMismatch, kTypeMismatch, kNonGroundInit };

  Kind kind;
  std::string message;
};

const char* to_string(Diagnostic::Kind kind);

/// Checks a problem against a domain. An empty result means the problem
/// grounds cleanly. Checks both init and goal; object types must be declared
/// by the domain.
std::vector<Diagnostic> validate_problem(const ProblemFile& problem, const DomainFile& domain);

}  // namespace pddlego::pddl
