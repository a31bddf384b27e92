#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pddlego::envs {

/// "a", "a, and b", "a, b, and c". The two-item form keeps the comma.
std::string join_items(const std::vector<std::string>& items);

/// "a knife", "an oven". Uncountables ("salt", "black pepper") take "some".
std::string with_article(std::string_view noun);

/// PDDL constant for a display name: lowercase, spaces become underscores.
std::string to_identifier(std::string_view display);

/// Inverse of to_identifier.
std::string from_identifier(std::string_view identifier);

/// Lowercases and collapses runs of whitespace; trims both ends.
std::string normalize_command(std::string_view command);

/// Rotating opener for the n-th furniture sentence of a room description.
std::string_view furniture_opener(std::size_t n);

}  // namespace pddlego::envs
