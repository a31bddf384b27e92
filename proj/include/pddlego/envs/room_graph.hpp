#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pddlego/envs/rng.hpp"

namespace pddlego::envs {

enum class Direction { kNorth, kSouth, kEast, kWest };

inline constexpr std::array<Direction, 4> kDirections = {Direction::kNorth, Direction::kSouth, Direction::kEast,
                                                         Direction::kWest};

/// "north", "south", ...
const char* to_string(Direction d);
/// "North", "South", ...
const char* capitalized(Direction d);
Direction reverse(Direction d);
std::optional<Direction> parse_direction(std::string_view word);

enum class Door { kNone, kClosed, kOpen };

struct Passage {
  std::size_t to = 0;
  Door door = Door::kNone;
  std::string material;  // empty when there is no door
};

/// Rooms and their exits. Every passage is stored on both sides with the
/// reversed direction, and door state is shared by the two sides.
class RoomGraph {
 public:
  std::size_t add_room(std::string name);

  /// Links `a` to `b` going `dir` (and `b` to `a` going the reverse).
  void connect(std::size_t a, Direction dir, std::size_t b, Door door = Door::kNone, std::string material = {});

  const Passage* passage(std::size_t room, Direction dir) const;

  /// Opens the door on both sides. No-op for doorless or already open passages.
  void open_door(std::size_t room, Direction dir);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t room) const { return names_.at(room); }
  std::optional<std::size_t> find(std::string_view name) const;

  /// Connected when doors are ignored (doors can always be opened).
  bool is_connected() const;

  /// Exit clauses in north, south, east, west order, space separated.
  std::string exits_text(std::size_t room) const;

  nlohmann::ordered_json to_json() const;

  /// Door state of every passage, for state fingerprints.
  std::string door_state() const;

 private:
  std::vector<std::string> names_;
  std::vector<std::array<std::optional<Passage>, 4>> exits_;
};

struct LayoutParams {
  double door_rate = 0.4;        // share of passages that start behind a closed door
  double extra_edge_rate = 0.25;  // chance of linking grid neighbours beyond the spanning tree
};

/// Random spanning tree grown on a grid (so directions stay geometrically
/// consistent) plus extra edges between grid neighbours. Room 0 is the root.
RoomGraph generate_layout(Rng& rng, const std::vector<std::string>& names, const LayoutParams& params);

}  // namespace pddlego::envs
