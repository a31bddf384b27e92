#include "pddlego/translator/observation.hpp"

#include <regex>

#include "pddlego/error.hpp"

namespace pddlego::translator {
namespace {

using Kind = ObservationView::Kind;

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void unrecognized(std::string_view text) {
  throw UnrecognizedObservation("unrecognized observation: " + std::string(text.substr(0, 160)));
}

std::vector<std::string> split_items(std::string_view list) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = list.find(", ", start);
    std::string part = trim(list.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (starts_with(part, "and ")) part = part.substr(4);
    if (!part.empty()) out.push_back(bare_item_name(part));
    if (pos == std::string_view::npos) break;
    start = pos + 2;
  }
  return out;
}

/// Sentences of a room description; the final period of each is dropped.
std::vector<std::string> sentences(std::string_view text) {
  std::string flat(text);
  for (char& c : flat)
    if (c == '\n') c = ' ';
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < flat.size()) {
    auto pos = flat.find(". ", start);
    if (pos == std::string::npos) {
      std::string last = trim(std::string_view(flat).substr(start));
      if (ends_with(last, ".")) last.pop_back();
      if (!last.empty()) out.push_back(last);
      break;
    }
    std::string s = trim(std::string_view(flat).substr(start, pos - start));
    if (!s.empty()) out.push_back(s);
    start = pos + 2;
  }
  return out;
}

std::string strip_article(std::string_view phrase) {
  for (std::string_view a : {"a ", "an ", "some "})
    if (starts_with(phrase, a)) return std::string(phrase.substr(a.size()));
  return std::string(phrase);
}

bool is_appliance(std::string_view name) {
  for (const auto& a : envs::appliance_names())
    if (a == name) return true;
  return false;
}

void read_furniture(const std::string& body, RoomView& view, std::string_view text) {
  static const std::regex surface_empty(R"((.+), that has nothing on it)");
  static const std::regex surface(R"((.+) that has (.+) on it)");
  static const std::regex closed(R"((.+) that is closed)");
  static const std::regex open_empty(R"((.+) that is open and empty)");
  static const std::regex open_full(R"((.+) that is open and contains (.+))");
  std::smatch m;
  FurnitureView f;
  if (std::regex_match(body, m, surface_empty)) {
    f = {strip_article(m.str(1)), envs::FurnitureKind::kSurface, false, {}};
  } else if (std::regex_match(body, m, open_empty)) {
    f = {strip_article(m.str(1)), envs::FurnitureKind::kContainer, true, {}};
  } else if (std::regex_match(body, m, open_full)) {
    f = {strip_article(m.str(1)), envs::FurnitureKind::kContainer, true, split_items(m.str(2))};
  } else if (std::regex_match(body, m, closed)) {
    f = {strip_article(m.str(1)), envs::FurnitureKind::kContainer, false, {}};
  } else if (std::regex_match(body, m, surface)) {
    f = {strip_article(m.str(1)), envs::FurnitureKind::kSurface, false, split_items(m.str(2))};
  } else {
    const std::string name = strip_article(body);
    if (name == "coin") {
      view.coin = true;
      return;
    }
    if (!is_appliance(name)) unrecognized(text);
    f = {name, envs::FurnitureKind::kAppliance, false, {}};
  }
  view.furniture.push_back(std::move(f));
}

RoomView read_room(std::string_view text) {
  static const std::regex here(R"(You are in the (.+))");
  static const std::regex opener(
      R"((In one part of the room you see|There is also|You also see|In another part of the room you see) (.+))");
  static const std::regex closed_exit(R"(To the (North|South|East|West) you see a closed (.+) door)");
  static const std::regex open_exit(R"(Through an open (.+) door, to the (North|South|East|West) you see the (.+))");
  static const std::regex plain_exit(R"(To the (North|South|East|West) you see the (.+))");
  RoomView view;
  const auto parts = sentences(text);
  std::smatch m;
  if (parts.empty() || !std::regex_match(parts[0], m, here)) unrecognized(text);
  view.room = m.str(1);
  auto direction = [](const std::string& word) {
    std::string lower = word;
    lower[0] = static_cast<char>(lower[0] - 'A' + 'a');
    return *envs::parse_direction(lower);
  };
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const std::string& s = parts[i];
    if (std::regex_match(s, m, closed_exit)) {
      view.exits.push_back({direction(m.str(1)), envs::Door::kClosed, m.str(2), std::nullopt});
    } else if (std::regex_match(s, m, open_exit)) {
      view.exits.push_back({direction(m.str(2)), envs::Door::kOpen, m.str(1), m.str(3)});
    } else if (std::regex_match(s, m, plain_exit)) {
      view.exits.push_back({direction(m.str(1)), envs::Door::kNone, "", m.str(2)});
    } else if (std::regex_match(s, m, opener)) {
      read_furniture(m.str(2), view, text);
    } else {
      unrecognized(text);
    }
  }
  return view;
}

bool is_rejection(std::string_view t) {
  static const std::vector<std::string_view> exact = {
      "You can't go that way.",
      "You can't move there, the door is closed.",
      "That door is already open.",
      "You don't see that here.",
      "That is already open.",
      "You can't open that.",
      "You can't take that.",
      "You don't have that.",
      "You can't do that.",
      "You need a knife for that.",
      "You can't prepare the meal yet.",
      "You don't have a meal to eat.",
      "That is not a command I recognize.",
      "Adding the meal to your inventory.",
      "You eat the meal.  It is delicious.",
      "You take the coin.",
  };
  for (auto e : exact)
    if (t == e) return true;
  if (starts_with(t, "There is no door to the ")) return true;
  return ends_with(t, "The meal is ruined.");
}

}  // namespace

std::string bare_item_name(std::string_view phrase) {
  std::string name = strip_article(trim(phrase));
  if (starts_with(name, "raw ")) name = name.substr(4);
  return name;
}

std::vector<Exchange> parse_exchanges(std::string_view log) {
  std::vector<Exchange> out;
  std::string pending_command;
  bool in_observation = false;
  std::size_t start = 0;
  bool saw_marker = false;
  while (start <= log.size()) {
    auto end = log.find('\n', start);
    if (end == std::string_view::npos) end = log.size();
    std::string_view line = log.substr(start, end - start);
    if (starts_with(line, "< ") || line == "<") {
      saw_marker = true;
      pending_command = trim(line.substr(1));
      in_observation = false;
    } else if (starts_with(line, "> ") || line == ">") {
      saw_marker = true;
      out.push_back({pending_command, trim(line.substr(1))});
      pending_command.clear();
      in_observation = true;
    } else if (in_observation) {
      out.back().observation += "\n" + std::string(line);
    }
    start = end + 1;
  }
  for (auto& e : out) e.observation = trim(e.observation);
  if (!saw_marker) {
    std::string text = trim(log);
    if (!text.empty()) out.push_back({"", text});
  }
  return out;
}

ObservationView read_observation(std::string_view raw) {
  const std::string text = trim(raw);
  ObservationView view;
  std::smatch m;
  if (starts_with(text, "You are in the ")) {
    view.kind = Kind::kRoom;
    view.room = read_room(text);
    return view;
  }
  if (is_rejection(text)) return view;
  if (auto recipe = envs::Recipe::parse(text)) {
    view.kind = Kind::kRecipe;
    view.recipe = std::move(recipe);
    return view;
  }
  static const std::regex door(R"(You open the (.+) door, revealing the (.+)\.)");
  static const std::regex container_empty(R"(You open the (.+)\. It's empty inside\.)");
  static const std::regex container_full(R"(You open the (.+)\. The (.+) contains (.+)\.)");
  static const std::regex take(R"(You take the (.+)\.)");
  static const std::regex knife(R"(You (slice|chop|dice) the (.+)\.)");
  static const std::regex cook(R"(You (grill|roast|fry) the (.+) with the (.+)\.)");
  if (std::regex_match(text, m, door)) {
    view.kind = Kind::kDoorOpened;
    view.target = m.str(2);
  } else if (std::regex_match(text, m, container_empty)) {
    view.kind = Kind::kContainerOpened;
    view.target = m.str(1);
  } else if (std::regex_match(text, m, container_full)) {
    if (m.str(1) != m.str(2)) unrecognized(text);
    view.kind = Kind::kContainerOpened;
    view.target = m.str(1);
    view.items = split_items(m.str(3));
  } else if (std::regex_match(text, m, cook)) {
    view.kind = Kind::kCooked;
    view.verb = m.str(1);
    view.target = m.str(2);
    view.appliance = m.str(3);
  } else if (std::regex_match(text, m, knife)) {
    view.kind = Kind::kKnifed;
    view.verb = m.str(1);
    view.target = m.str(2);
  } else if (std::regex_match(text, m, take)) {
    view.kind = Kind::kTaken;
    view.target = m.str(1);
  } else {
    unrecognized(text);
  }
  return view;
}

}  // namespace pddlego::translator
