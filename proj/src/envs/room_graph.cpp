#include "pddlego/envs/room_graph.hpp"

#include <deque>
#include <map>
#include <utility>

#include "pddlego/error.hpp"

namespace pddlego::envs {

const char* to_string(Direction d) {
  switch (d) {
    case Direction::kNorth: return "north";
    case Direction::kSouth: return "south";
    case Direction::kEast: return "east";
    case Direction::kWest: return "west";
  }
  return "?";
}

const char* capitalized(Direction d) {
  switch (d) {
    case Direction::kNorth: return "North";
    case Direction::kSouth: return "South";
    case Direction::kEast: return "East";
    case Direction::kWest: return "West";
  }
  return "?";
}

Direction reverse(Direction d) {
  switch (d) {
    case Direction::kNorth: return Direction::kSouth;
    case Direction::kSouth: return Direction::kNorth;
    case Direction::kEast: return Direction::kWest;
    case Direction::kWest: return Direction::kEast;
  }
  return d;
}

std::optional<Direction> parse_direction(std::string_view word) {
  for (Direction d : kDirections)
    if (word == to_string(d)) return d;
  return std::nullopt;
}

std::size_t RoomGraph::add_room(std::string name) {
  names_.push_back(std::move(name));
  exits_.emplace_back();
  return names_.size() - 1;
}

void RoomGraph::connect(std::size_t a, Direction dir, std::size_t b, Door door, std::string material) {
  auto& forward = exits_.at(a)[static_cast<int>(dir)];
  auto& backward = exits_.at(b)[static_cast<int>(reverse(dir))];
  if (forward || backward) throw Error("passage already present between " + names_[a] + " and " + names_[b]);
  forward = Passage{b, door, material};
  backward = Passage{a, door, std::move(material)};
}

const Passage* RoomGraph::passage(std::size_t room, Direction dir) const {
  const auto& slot = exits_.at(room)[static_cast<int>(dir)];
  return slot ? &*slot : nullptr;
}

void RoomGraph::open_door(std::size_t room, Direction dir) {
  auto& forward = exits_.at(room)[static_cast<int>(dir)];
  if (!forward || forward->door != Door::kClosed) return;
  forward->door = Door::kOpen;
  exits_[forward->to][static_cast<int>(reverse(dir))]->door = Door::kOpen;
}

std::optional<std::size_t> RoomGraph::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

bool RoomGraph::is_connected() const {
  if (names_.empty()) return true;
  std::vector<bool> seen(names_.size(), false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!queue.empty()) {
    const std::size_t r = queue.front();
    queue.pop_front();
    for (const auto& p : exits_[r]) {
      if (!p || seen[p->to]) continue;
      seen[p->to] = true;
      ++count;
      queue.push_back(p->to);
    }
  }
  return count == names_.size();
}

std::string RoomGraph::exits_text(std::size_t room) const {
  std::string out;
  for (Direction d : kDirections) {
    const Passage* p = passage(room, d);
    if (!p) continue;
    if (!out.empty()) out += ' ';
    const std::string where = capitalized(d);
    switch (p->door) {
      case Door::kNone:
        out += "To the " + where + " you see the " + names_[p->to] + ".";
        break;
      case Door::kClosed:
        out += "To the " + where + " you see a closed " + p->material + " door.";
        break;
      case Door::kOpen:
        out += "Through an open " + p->material + " door, to the " + where + " you see the " + names_[p->to] + ".";
        break;
    }
  }
  return out;
}

nlohmann::ordered_json RoomGraph::to_json() const {
  auto rooms = nlohmann::ordered_json::array();
  for (const auto& n : names_) rooms.push_back(n);
  auto passages = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < names_.size(); ++r) {
    for (Direction d : kDirections) {
      const Passage* p = passage(r, d);
      if (!p) continue;
      nlohmann::ordered_json e;
      e["from"] = names_[r];
      e["direction"] = to_string(d);
      e["to"] = names_[p->to];
      e["door"] = p->door == Door::kNone ? "none" : p->door == Door::kClosed ? "closed" : "open";
      if (!p->material.empty()) e["material"] = p->material;
      passages.push_back(std::move(e));
    }
  }
  nlohmann::ordered_json out;
  out["rooms"] = std::move(rooms);
  out["passages"] = std::move(passages);
  return out;
}

std::string RoomGraph::door_state() const {
  std::string out;
  for (const auto& slots : exits_)
    for (const auto& p : slots) out += !p ? '-' : p->door == Door::kNone ? 'n' : p->door == Door::kClosed ? 'c' : 'o';
  return out;
}

namespace {

const std::vector<std::string>& door_materials() {
  static const std::vector<std::string> materials = {"wooden", "glass", "plain",  "wood",
                                                     "screen", "barn",  "sliding patio", "frosted-glass"};
  return materials;
}

using Cell = std::pair<int, int>;

Cell neighbour(Cell c, Direction d) {
  switch (d) {
    case Direction::kNorth: return {c.first, c.second + 1};
    case Direction::kSouth: return {c.first, c.second - 1};
    case Direction::kEast: return {c.first + 1, c.second};
    case Direction::kWest: return {c.first - 1, c.second};
  }
  return c;
}

}  // namespace

RoomGraph generate_layout(Rng& rng, const std::vector<std::string>& names, const LayoutParams& params) {
  RoomGraph graph;
  for (const auto& n : names) graph.add_room(n);
  if (names.empty()) return graph;

  std::vector<Cell> cell_of{{0, 0}};
  std::map<Cell, std::size_t> room_at{{{0, 0}, 0}};
  auto make_door = [&](Door& door, std::string& material) {
    door = rng.chance(params.door_rate) ? Door::kClosed : Door::kNone;
    material = door == Door::kClosed ? rng.choice(door_materials()) : std::string();
  };

  for (std::size_t next = 1; next < names.size(); ++next) {
    // Candidate (room, direction) slots whose grid cell is free, in a fixed order.
    std::vector<std::pair<std::size_t, Direction>> slots;
    for (std::size_t r = 0; r < next; ++r)
      for (Direction d : kDirections)
        if (!room_at.count(neighbour(cell_of[r], d))) slots.emplace_back(r, d);
    const auto [from, dir] = rng.choice(slots);
    const Cell cell = neighbour(cell_of[from], dir);
    cell_of.push_back(cell);
    room_at[cell] = next;
    Door door;
    std::string material;
    make_door(door, material);
    graph.connect(from, dir, next, door, material);
  }

  for (std::size_t r = 0; r < names.size(); ++r) {
    for (Direction d : {Direction::kNorth, Direction::kEast}) {
      auto it = room_at.find(neighbour(cell_of[r], d));
      if (it == room_at.end() || graph.passage(r, d)) continue;
      if (!rng.chance(params.extra_edge_rate)) continue;
      Door door;
      std::string material;
      make_door(door, material);
      graph.connect(r, d, it->second, door, material);
    }
  }
  return graph;
}

}  // namespace pddlego::envs
