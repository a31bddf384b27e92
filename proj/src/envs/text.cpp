#include "pddlego/envs/text.hpp"

#include <array>
#include <cctype>

namespace pddlego::envs {

std::string join_items(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += i + 1 == items.size() ? ", and " : ", ";
    out += items[i];
  }
  return out;
}

std::string with_article(std::string_view noun) {
  if (noun == "salt" || noun == "black pepper") return "some " + std::string(noun);
  const bool vowel = !noun.empty() && std::string_view("aeiou").find(noun.front()) != std::string_view::npos;
  return (vowel ? "an " : "a ") + std::string(noun);
}

std::string to_identifier(std::string_view display) {
  std::string out;
  for (char c : display) out += c == ' ' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string from_identifier(std::string_view identifier) {
  std::string out(identifier);
  for (char& c : out)
    if (c == '_') c = ' ';
  return out;
}

std::string normalize_command(std::string_view command) {
  std::string out;
  bool space = false;
  for (char c : command) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string_view furniture_opener(std::size_t n) {
  static constexpr std::array<std::string_view, 4> openers = {
      "In one part of the room you see", "There is also", "You also see", "In another part of the room you see"};
  return openers[n % openers.size()];
}

}  // namespace pddlego::envs
