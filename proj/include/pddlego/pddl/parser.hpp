#pragma once

#include <string>
#include <string_view>

#include "pddlego/pddl/ast.hpp"

namespace pddlego::pddl {

// All parsers lowercase identifiers and strip `;` comments. They throw
// SyntaxError (with 1-based line/column) on malformed input.

/// Parses a `(define (domain ...))` form. Rejects requirement flags other
/// than :strips :typing :negative-preconditions :disjunctive-preconditions
/// with UnsupportedRequirement.
DomainFile parse_domain(std::string_view text);

/// Parses a `(define (problem ...))` form. The result is not checked against
/// any domain; see validate_problem.
ProblemFile parse_problem(std::string_view text);

/// A single ground or lifted atom such as `(connected kitchen loc1 south)`.
Atom parse_atom(std::string_view text);

/// A single object declaration line, `name - type`.
TypedName parse_object_line(std::string_view text);

/// A goal-style condition: atom, `not`, `and`, `or`.
Condition parse_condition(std::string_view text);

/// Reads a whole file into memory; throws Error if it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace pddlego::pddl
