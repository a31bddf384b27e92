#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pddlego/envs/environment.hpp"
#include "pddlego/envs/room_graph.hpp"

namespace pddlego::envs {

enum class KnifeStep { kNone, kSlice, kChop, kDice };
enum class CookStep { kNone, kGrill, kRoast, kFry };

/// "slice", "chop", "dice"; empty for kNone.
const char* to_string(KnifeStep step);
/// "grill", "roast", "fry"; empty for kNone.
const char* to_string(CookStep step);
std::optional<KnifeStep> parse_knife_step(std::string_view verb);
std::optional<CookStep> parse_cook_step(std::string_view verb);

/// The cook step an appliance performs: toaster and barbeque grill, oven
/// roasts, stove fries.
std::optional<CookStep> appliance_step(std::string_view appliance);

struct RecipeItem {
  std::string name;  // display name, e.g. "yellow potato"
  KnifeStep knife = KnifeStep::kNone;
  CookStep cook = CookStep::kNone;

  bool operator==(const RecipeItem&) const = default;
};

struct Recipe {
  std::vector<RecipeItem> items;

  const RecipeItem* find(std::string_view name) const;
  bool needs_knife() const;

  /// The cookbook text.
  std::string text() const;

  /// Inverse of text(); nullopt if `text` is not a cookbook page.
  static std::optional<Recipe> parse(std::string_view text);

  bool operator==(const Recipe&) const = default;
};

enum class FurnitureKind { kSurface, kContainer, kAppliance };

struct Furniture {
  std::string name;
  FurnitureKind kind = FurnitureKind::kSurface;
  std::size_t room = 0;
  bool open = false;                  // containers only
  std::vector<std::string> contents;  // items on a surface or inside a container
};

struct CookingParams {
  Difficulty difficulty = Difficulty::kEasy;
  std::size_t rooms = 2;
  std::size_t ingredients = 2;
  std::size_t step_cap = 20;
  LayoutParams layout;

  static CookingParams easy();
  static CookingParams hard();
};

/// Read the recipe, gather and process the ingredients, prepare and eat the meal.
class CookingEnv final : public Environment {
 public:
  CookingEnv(std::uint64_t seed, const CookingParams& params);

  EnvKind kind() const override { return EnvKind::kCooking; }
  std::unique_ptr<Environment> clone() const override { return std::make_unique<CookingEnv>(*this); }
  nlohmann::ordered_json snapshot() const override;
  std::string state_key() const override;
  std::string current_room() const override { return graph_.name(agent_); }
  std::vector<std::string> valid_actions() const override;

  const RoomGraph& graph() const { return graph_; }
  const Recipe& recipe() const { return recipe_; }
  const std::vector<Furniture>& furniture() const { return furniture_; }
  const std::set<std::string>& inventory() const { return inventory_; }
  std::size_t agent_room() const { return agent_; }
  Difficulty difficulty() const { return params_.difficulty; }

  /// Index of the furniture holding `item`, if it is still in the world.
  std::optional<std::size_t> holder_of(std::string_view item) const;

 protected:
  std::string describe() const override;
  Transition apply(const std::string& command) override;

 private:
  struct Progress {
    bool knifed = false;
    bool cooked = false;
  };

  std::string item_phrase(const std::string& item) const;
  std::string furniture_sentence(const Furniture& f) const;
  bool ready_to_prepare() const;
  Transition process(const std::string& ingredient, std::optional<KnifeStep> knife, std::optional<CookStep> cook,
                     const std::string& appliance);

  std::uint64_t seed_;
  CookingParams params_;
  RoomGraph graph_;
  Recipe recipe_;
  std::vector<Furniture> furniture_;
  std::size_t agent_ = 0;
  std::set<std::string> inventory_;
  std::map<std::string, Progress> progress_;
  bool cookbook_read_ = false;
  bool meal_prepared_ = false;
  bool meal_eaten_ = false;
};

CookingEnv gen_cooking_env(std::uint64_t seed, Difficulty difficulty);
CookingEnv gen_cooking_env(std::uint64_t seed, const CookingParams& params);

/// Display names of every ingredient the generator can place.
const std::vector<std::string>& ingredient_catalog();
/// Appliance names: stove, oven, toaster, barbeque.
const std::vector<std::string>& appliance_names();

}  // namespace pddlego::envs
