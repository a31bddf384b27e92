#pragma once

#include <span>
#include <string_view>

namespace pddlego {

/// A data file compiled into the library: the domain files and prompt templates.
struct ResourceEntry {
  std::string_view name;
  std::string_view text;
};

std::span<const ResourceEntry> resource_entries();

/// Text of an embedded file by base name, e.g. "coin-domain.pddl". Throws
/// Error for unknown names.
std::string_view resource(std::string_view name);

}  // namespace pddlego
