#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pddlego/pddl/ast.hpp"

namespace pddlego::edit {

/// Line-level edits to one problem section. Lines are stored in canonical
/// form (lowercase, single-spaced) so matching ignores cosmetic differences.
struct SectionDelta {
  std::vector<std::string> add;
  std::vector<std::pair<std::string, std::string>> replace;  // old line -> new line, in document order
  std::vector<std::string> remove;                           // the JSON "delete" key

  bool empty() const { return add.empty() && replace.empty() && remove.empty(); }
  bool operator==(const SectionDelta&) const = default;
};

/// A structured edit over a problem file's `objects` and `init` sections.
/// Object lines read `name - type`; init lines are ground atoms.
struct Delta {
  SectionDelta objects;
  SectionDelta init;

  bool empty() const { return objects.empty() && init.empty(); }
  bool operator==(const Delta&) const = default;
};

/// Decodes the edit JSON. Missing sections or keys default to empty; unknown
/// keys, non-string lines, unparseable lines and contradictory edits (a line
/// both added and deleted, or replaced and deleted) raise MalformedDelta.
Delta parse_delta_json(std::string_view text);

/// Encodes in the exact key order objects/init then add/replace/delete, with
/// two-space indentation.
std::string to_json(const Delta& delta);

struct EditWarning {
  enum class Kind { kDanglingDelete, kDanglingReplace };
  Kind kind;
  std::string section;
  std::string line;
};

struct ApplyResult {
  pddl::ProblemFile problem;
  std::vector<EditWarning> warnings;
};

/// Applies `delta` to `problem`. Per section, deletes run first, then
/// replaces, then adds; `objects` is processed before `init`. Replacing an
/// object line renames that object in every init atom (never in the goal).
/// Deleting or replacing a missing line is a warning, not an error.
/// Throws RenameCollision when a rename targets an already declared name.
ApplyResult apply_delta(const pddl::ProblemFile& problem, const Delta& delta);

/// Replaces the goal. Throws UndeclaredObject if the goal mentions an
/// undeclared constant or a variable.
pddl::ProblemFile set_goal(const pddl::ProblemFile& problem, pddl::Condition goal);

/// Set difference of canonical lines, as deletes and adds only. Renames are
/// not inferred. apply_delta(a, diff_problems(a, b)) equals b except for the goal.
Delta diff_problems(const pddl::ProblemFile& a, const pddl::ProblemFile& b);

/// True if the delta deletes or replaces away a `visited` fact. Such a delta
/// contradicts the monotone nature of visits and is treated as a bad edit.
bool deletes_visited(const Delta& delta);

}  // namespace pddlego::edit
