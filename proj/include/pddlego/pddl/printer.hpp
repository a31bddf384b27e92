#pragma once

#include <string>

#include "pddlego/pddl/ast.hpp"

namespace pddlego::pddl {

/// `(pred a b)`; the canonical one-line form used for delta line matching.
std::string to_string(const Atom& atom);
/// `name - type`.
std::string to_string(const TypedName& object);
std::string to_string(const Condition& condition);

/// Canonical problem text: objects grouped by type and sorted by name, one
/// init fact per line in sorted order, lowercase, two-space indentation.
/// Equal problems always print to identical bytes.
std::string print_problem(const ProblemFile& problem);

std::string print_domain(const DomainFile& domain);

}  // namespace pddlego::pddl
