#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pddlego/envs/cooking.hpp"
#include "pddlego/envs/room_graph.hpp"

namespace pddlego::translator {

/// One `< command` / `> observation` pair. The command is empty for the
/// observation that opens a log.
struct Exchange {
  std::string command;
  std::string observation;
};

/// Splits a log into exchanges. Text without any `>` marker is read as a
/// single observation with no command.
std::vector<Exchange> parse_exchanges(std::string_view log);

struct ExitView {
  envs::Direction direction = envs::Direction::kNorth;
  envs::Door door = envs::Door::kNone;
  std::string material;            // for doors
  std::optional<std::string> room;  // known unless the door is closed
};

struct FurnitureView {
  std::string name;
  envs::FurnitureKind kind = envs::FurnitureKind::kSurface;
  bool open = false;
  std::vector<std::string> items;  // bare item names, article and "raw" removed
};

struct RoomView {
  std::string room;
  std::vector<FurnitureView> furniture;
  std::vector<ExitView> exits;
  bool coin = false;
};

/// What one observation says, classified by sentence template.
struct ObservationView {
  enum class Kind {
    kRoom,             // room description
    kDoorOpened,       // "You open the wood door, revealing the bedroom."
    kContainerOpened,  // "You open the fridge. ..."
    kTaken,            // "You take the knife."
    kKnifed,           // "You slice the block of cheese."
    kCooked,           // "You grill the yellow potato with the barbeque."
    kRecipe,           // cookbook page
    kNoChange,         // rejections, meal messages, ruined processing
  };

  Kind kind = Kind::kNoChange;
  RoomView room;
  std::string target;     // door's room, container, taken item, processed ingredient
  std::string verb;       // knife or cook verb
  std::string appliance;  // for kCooked
  std::vector<std::string> items;  // container contents
  std::optional<envs::Recipe> recipe;
};

/// Throws UnrecognizedObservation for text that matches no template.
ObservationView read_observation(std::string_view text);

/// "a raw yellow potato" -> "yellow potato".
std::string bare_item_name(std::string_view phrase);

}  // namespace pddlego::translator
