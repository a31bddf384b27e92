#include "pddlego/envs/cooking.hpp"

#include <algorithm>
#include <sstream>

#include "pddlego/envs/coin.hpp"
#include "pddlego/envs/text.hpp"
#include "pddlego/error.hpp"

namespace pddlego::envs {
namespace {

constexpr std::string_view kKnife = "knife";
constexpr std::string_view kCookbook = "cookbook";
constexpr std::string_view kMeal = "meal";

struct FurnitureSpec {
  const char* name;
  FurnitureKind kind;
};

constexpr FurnitureKind S = FurnitureKind::kSurface;
constexpr FurnitureKind C = FurnitureKind::kContainer;
constexpr FurnitureKind A = FurnitureKind::kAppliance;

const std::vector<FurnitureSpec>& furniture_for(const std::string& room) {
  static const std::map<std::string, std::vector<FurnitureSpec>> catalog = {
      {"kitchen",
       {{"stove", A}, {"oven", A}, {"fridge", C}, {"counter", S}, {"kitchen cupboard", C}, {"cutlery drawer", C},
        {"trash can", C}, {"dishwasher", C}, {"dining chair", S}}},
      {"corridor", {{"key holder", S}, {"shoe cabinet", C}, {"umbrella stand", S}, {"hat rack", S}, {"coat hanger", S}}},
      {"bedroom",
       {{"dressing table", S}, {"desk chair", S}, {"desk", S}, {"chest of drawers", C}, {"wardrobe", C},
        {"night stand", S}, {"bed", S}}},
      {"backyard",
       {{"barbeque", A}, {"workbench", S}, {"patio chair", S}, {"patio table", S}, {"clothes line", S}, {"garden", S}}},
      {"pantry", {{"folding chair", S}, {"shelf", S}}},
      {"living room", {{"sofa", S}, {"coffee table", S}, {"bookcase", S}, {"side cabinet", C}}},
      {"bathroom", {{"toilet", S}, {"bath mat", S}, {"bathroom cabinet", C}}},
      {"laundry room", {{"washing machine", C}, {"clothes drier", C}, {"laundry basket", C}, {"work table", S}}},
      {"garage", {{"tool box", C}, {"shelving unit", S}}},
  };
  return catalog.at(room);
}

const std::vector<std::string>& other_rooms() {
  static const std::vector<std::string> rooms = {"corridor",    "pantry",   "backyard",     "bedroom",
                                                 "living room", "bathroom", "laundry room", "garage"};
  return rooms;
}

struct IngredientSpec {
  const char* name;
  bool raw;        // shown as "a raw ..." while in the world
  bool processed;  // takes knife and cook steps
};

const std::vector<IngredientSpec>& ingredient_specs() {
  static const std::vector<IngredientSpec> specs = {
      {"block of cheese", false, true}, {"red apple", false, true},      {"yellow potato", true, true},
      {"red potato", true, true},       {"purple potato", true, true},   {"carrot", false, true},
      {"red onion", false, true},       {"white onion", false, true},    {"yellow bell pepper", false, true},
      {"red bell pepper", false, true}, {"banana", false, true},         {"chicken breast", true, true},
      {"chicken wing", true, true},     {"pork chop", true, true},       {"cucumber", false, true},
      {"black pepper", false, false},   {"salt", false, false},
  };
  return specs;
}

const IngredientSpec* find_spec(std::string_view name) {
  for (const auto& s : ingredient_specs())
    if (name == s.name) return &s;
  return nullptr;
}

std::string past_tense(CookStep step) {
  switch (step) {
    case CookStep::kGrill: return "grilled";
    case CookStep::kRoast: return "roasted";
    case CookStep::kFry: return "fried";
    case CookStep::kNone: break;
  }
  return "";
}

std::vector<std::string> split(std::string_view text, std::string_view sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + sep.size();
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

const char* to_string(KnifeStep step) {
  switch (step) {
    case KnifeStep::kSlice: return "slice";
    case KnifeStep::kChop: return "chop";
    case KnifeStep::kDice: return "dice";
    case KnifeStep::kNone: break;
  }
  return "";
}

const char* to_string(CookStep step) {
  switch (step) {
    case CookStep::kGrill: return "grill";
    case CookStep::kRoast: return "roast";
    case CookStep::kFry: return "fry";
    case CookStep::kNone: break;
  }
  return "";
}

std::optional<KnifeStep> parse_knife_step(std::string_view verb) {
  for (KnifeStep s : {KnifeStep::kSlice, KnifeStep::kChop, KnifeStep::kDice})
    if (verb == to_string(s)) return s;
  return std::nullopt;
}

std::optional<CookStep> parse_cook_step(std::string_view verb) {
  for (CookStep s : {CookStep::kGrill, CookStep::kRoast, CookStep::kFry})
    if (verb == to_string(s)) return s;
  return std::nullopt;
}

std::optional<CookStep> appliance_step(std::string_view appliance) {
  if (appliance == "toaster" || appliance == "barbeque") return CookStep::kGrill;
  if (appliance == "oven") return CookStep::kRoast;
  if (appliance == "stove") return CookStep::kFry;
  return std::nullopt;
}

const std::vector<std::string>& appliance_names() {
  static const std::vector<std::string> names = {"stove", "oven", "toaster", "barbeque"};
  return names;
}

const std::vector<std::string>& ingredient_catalog() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : ingredient_specs()) out.emplace_back(s.name);
    return out;
  }();
  return names;
}

const RecipeItem* Recipe::find(std::string_view name) const {
  for (const auto& item : items)
    if (item.name == name) return &item;
  return nullptr;
}

bool Recipe::needs_knife() const {
  return std::any_of(items.begin(), items.end(), [](const RecipeItem& i) { return i.knife != KnifeStep::kNone; });
}

std::string Recipe::text() const {
  std::vector<std::string> names, directions;
  for (const auto& item : items) {
    names.push_back(item.name);
    if (item.knife != KnifeStep::kNone) directions.push_back(std::string(to_string(item.knife)) + " the " + item.name);
    if (item.cook != CookStep::kNone) directions.push_back(std::string(to_string(item.cook)) + " the " + item.name);
  }
  directions.emplace_back("prepare meal");
  auto join = [](const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
    return out;
  };
  return "Gather all following ingredients and follow the directions to prepare this tasty meal.\n"
         "Ingredients:\n  " +
         join(names) + "\nDirections:\n  " + join(directions);
}

std::optional<Recipe> Recipe::parse(std::string_view text) {
  const std::string_view head = "Gather all following ingredients";
  if (text.substr(0, head.size()) != head) return std::nullopt;
  const auto ing = text.find("Ingredients:");
  const auto dir = text.find("Directions:");
  if (ing == std::string_view::npos || dir == std::string_view::npos || dir < ing) return std::nullopt;
  Recipe recipe;
  for (const auto& name : split(trim(text.substr(ing + 12, dir - ing - 12)), ", ")) {
    if (name.empty()) continue;
    recipe.items.push_back({name, KnifeStep::kNone, CookStep::kNone});
  }
  for (const auto& direction : split(trim(text.substr(dir + 11)), ", ")) {
    if (direction == "prepare meal" || direction.empty()) continue;
    const auto sp = direction.find(" the ");
    if (sp == std::string::npos) return std::nullopt;
    const std::string verb = direction.substr(0, sp), target = direction.substr(sp + 5);
    auto it = std::find_if(recipe.items.begin(), recipe.items.end(), [&](const RecipeItem& i) { return i.name == target; });
    if (it == recipe.items.end()) return std::nullopt;
    if (auto k = parse_knife_step(verb)) it->knife = *k;
    else if (auto c = parse_cook_step(verb)) it->cook = *c;
    else return std::nullopt;
  }
  return recipe;
}

CookingParams CookingParams::easy() { return {}; }

CookingParams CookingParams::hard() {
  CookingParams p;
  p.difficulty = Difficulty::kHard;
  p.rooms = 5;
  p.ingredients = 5;
  p.step_cap = 50;
  return p;
}

CookingEnv::CookingEnv(std::uint64_t seed, const CookingParams& params)
    : Environment(params.step_cap), seed_(seed), params_(params) {
  if (params.rooms < 1 || params.rooms > other_rooms().size() + 1)
    throw PreconditionViolation("cooking environment supports 1 to " + std::to_string(other_rooms().size() + 1) +
                                " rooms");
  if (params.ingredients < 1 || params.ingredients > ingredient_specs().size())
    throw PreconditionViolation("cooking environment supports 1 to " + std::to_string(ingredient_specs().size()) +
                                " ingredients");
  const bool hard = params.difficulty == Difficulty::kHard;
  Rng rng(mix_seed({seed, static_cast<std::uint64_t>(params.difficulty), params.rooms, params.ingredients, 0xc00c}));

  std::vector<std::string> names = other_rooms();
  rng.shuffle(names);
  names.resize(params.rooms - 1);
  names.insert(names.begin(), "kitchen");
  graph_ = generate_layout(rng, names, params.layout);

  std::vector<IngredientSpec> chosen = ingredient_specs();
  rng.shuffle(chosen);
  chosen.resize(params.ingredients);
  for (const auto& spec : chosen) {
    RecipeItem item{spec.name, KnifeStep::kNone, CookStep::kNone};
    if (spec.processed) {
      item.knife = static_cast<KnifeStep>(rng.below(4));
      item.cook = static_cast<CookStep>(rng.below(4));
    }
    recipe_.items.push_back(item);
  }
  auto needs_grill = [&] {
    return std::any_of(recipe_.items.begin(), recipe_.items.end(),
                       [](const RecipeItem& i) { return i.cook == CookStep::kGrill; });
  };
  if (hard && !needs_grill()) {
    std::vector<std::size_t> produce;
    for (std::size_t i = 0; i < chosen.size(); ++i)
      if (chosen[i].processed) produce.push_back(i);
    if (!produce.empty()) recipe_.items[rng.choice(produce)].cook = CookStep::kGrill;
  }

  for (std::size_t r = 0; r < graph_.size(); ++r)
    for (const auto& spec : furniture_for(graph_.name(r))) furniture_.push_back({spec.name, spec.kind, r, false, {}});

  // The toaster goes wherever; hard games keep it out of the kitchen so grilling needs a trip.
  const bool has_barbeque = graph_.find("backyard").has_value();
  const bool want_toaster = !has_barbeque && (needs_grill() || rng.chance(0.5));
  if (want_toaster && !(hard && graph_.size() == 1)) {
    const std::size_t room = hard ? 1 + rng.below(graph_.size() - 1) : rng.below(graph_.size());
    auto pos = std::find_if(furniture_.begin(), furniture_.end(), [&](const Furniture& f) {
      return f.room == room && f.kind != FurnitureKind::kAppliance;
    });
    furniture_.insert(pos, {"toaster", FurnitureKind::kAppliance, room, false, {}});
  }

  auto counter = [&]() -> Furniture& {
    return *std::find_if(furniture_.begin(), furniture_.end(), [](const Furniture& f) { return f.name == "counter"; });
  };
  counter().contents.emplace_back(kKnife);
  std::vector<std::size_t> holders;
  for (std::size_t i = 0; i < furniture_.size(); ++i)
    if (furniture_[i].kind != FurnitureKind::kAppliance) holders.push_back(i);
  for (const auto& item : recipe_.items) furniture_[rng.choice(holders)].contents.push_back(item.name);
  counter().contents.emplace_back(kCookbook);
}

std::optional<std::size_t> CookingEnv::holder_of(std::string_view item) const {
  for (std::size_t i = 0; i < furniture_.size(); ++i) {
    const auto& c = furniture_[i].contents;
    if (std::find(c.begin(), c.end(), item) != c.end()) return i;
  }
  return std::nullopt;
}

std::string CookingEnv::item_phrase(const std::string& item) const {
  const IngredientSpec* spec = find_spec(item);
  return with_article(spec && spec->raw ? "raw " + item : item);
}

std::string CookingEnv::furniture_sentence(const Furniture& f) const {
  std::vector<std::string> items;
  for (const auto& i : f.contents) items.push_back(item_phrase(i));
  const std::string base = with_article(f.name);
  switch (f.kind) {
    case FurnitureKind::kAppliance:
      return base;
    case FurnitureKind::kContainer:
      if (!f.open) return base + " that is closed";
      if (items.empty()) return base + " that is open and empty";
      return base + " that is open and contains " + join_items(items);
    case FurnitureKind::kSurface:
      if (items.empty()) return base + ", that has nothing on it";
      return base + " that has " + join_items(items) + " on it";
  }
  return base;
}

std::string CookingEnv::describe() const {
  std::string out = "You are in the " + graph_.name(agent_) + ".";
  std::size_t n = 0;
  for (const auto& f : furniture_) {
    if (f.room != agent_) continue;
    out += " " + std::string(furniture_opener(n++)) + " " + furniture_sentence(f) + ".";
  }
  const std::string exits = graph_.exits_text(agent_);
  if (!exits.empty()) out += (n > 0 ? "\n" : " ") + exits;
  return out;
}

bool CookingEnv::ready_to_prepare() const {
  if (meal_prepared_ || graph_.name(agent_) != "kitchen") return false;
  for (const auto& item : recipe_.items) {
    if (!inventory_.count(item.name)) return false;
    auto it = progress_.find(item.name);
    const Progress p = it == progress_.end() ? Progress{} : it->second;
    if ((item.knife != KnifeStep::kNone) != p.knifed) return false;
    if ((item.cook != CookStep::kNone) != p.cooked) return false;
  }
  return true;
}

std::vector<std::string> CookingEnv::valid_actions() const {
  std::vector<std::string> out{"look around"};
  for (auto& c : navigation_commands()) out.push_back(std::move(c));
  if (graph_.name(agent_) == "kitchen") out.emplace_back("examine cookbook");
  std::vector<std::string> appliances;
  for (const auto& f : furniture_) {
    if (f.room != agent_) continue;
    if (f.kind == FurnitureKind::kAppliance) appliances.push_back(f.name);
    if (f.kind == FurnitureKind::kContainer && !f.open) out.push_back("open " + f.name);
  }
  for (const auto& f : furniture_) {
    if (f.room != agent_ || (f.kind == FurnitureKind::kContainer && !f.open)) continue;
    for (const auto& item : f.contents)
      if (item != kCookbook) out.push_back("take " + item);
  }
  const bool knife = inventory_.count(std::string(kKnife)) > 0;
  for (const auto& item : inventory_) {
    if (item == kKnife || item == kMeal) continue;
    if (knife)
      for (KnifeStep s : {KnifeStep::kChop, KnifeStep::kDice, KnifeStep::kSlice})
        out.push_back(std::string(to_string(s)) + " " + item);
    for (const auto& a : appliances) out.push_back("cook " + item + " in " + a);
  }
  if (ready_to_prepare()) out.emplace_back("prepare meal");
  if (inventory_.count(std::string(kMeal))) out.emplace_back("eat meal");
  return out;
}

Environment::Transition CookingEnv::process(const std::string& ingredient, std::optional<KnifeStep> knife,
                                            std::optional<CookStep> cook, const std::string& appliance) {
  const RecipeItem* item = recipe_.find(ingredient);
  Progress& p = progress_[ingredient];
  if (knife) {
    const std::string verb = to_string(*knife);
    const std::string done = "You " + verb + " the " + ingredient;
    if (!item || item->knife != *knife || p.knifed)
      return {done + ", which the recipe does not call for. The meal is ruined.", StepStatus::kOk, Outcome::kFailure,
              "processing error: " + verb + " " + ingredient};
    p.knifed = true;
    return {done + "."};
  }
  const std::string verb = to_string(*cook);
  const std::string done = "You " + verb + " the " + ingredient + " with the " + appliance;
  if (!item || item->cook != *cook || p.cooked)
    return {done + ", which the recipe does not call for. The meal is ruined.", StepStatus::kOk, Outcome::kFailure,
            "processing error: " + past_tense(*cook) + " " + ingredient};
  if (item->knife != KnifeStep::kNone && !p.knifed)
    return {done + " before you " + to_string(item->knife) + " it. The meal is ruined.", StepStatus::kOk,
            Outcome::kFailure, "processing error: " + ingredient + " " + past_tense(*cook) + " before the knife step"};
  p.cooked = true;
  return {done + "."};
}

Environment::Transition CookingEnv::apply(const std::string& command) {
  if (auto nav = navigate(graph_, agent_, command, [this] { return describe(); })) return *nav;
  if (command == "look around") return {describe()};
  if (command == "examine cookbook") {
    if (graph_.name(agent_) != "kitchen") return invalid("You don't see that here.");
    cookbook_read_ = true;
    return {recipe_.text()};
  }
  if (command.rfind("open ", 0) == 0) {
    const std::string name = command.substr(5);
    for (auto& f : furniture_) {
      if (f.room != agent_ || f.name != name) continue;
      if (f.kind != FurnitureKind::kContainer) return invalid("You can't open that.");
      if (f.open) return invalid("That is already open.");
      f.open = true;
      std::string text = "You open the " + f.name + ". ";
      if (f.contents.empty()) return {text + "It's empty inside."};
      std::vector<std::string> items;
      for (const auto& i : f.contents) items.push_back(item_phrase(i));
      return {text + "The " + f.name + " contains " + join_items(items) + "."};
    }
    return invalid("You don't see that here.");
  }
  if (command.rfind("take ", 0) == 0) {
    const std::string name = command.substr(5);
    if (name == kCookbook) return invalid("You can't take that.");
    for (auto& f : furniture_) {
      if (f.room != agent_ || (f.kind == FurnitureKind::kContainer && !f.open)) continue;
      auto it = std::find(f.contents.begin(), f.contents.end(), name);
      if (it == f.contents.end()) continue;
      f.contents.erase(it);
      inventory_.insert(name);
      return {"You take the " + name + "."};
    }
    return invalid("You don't see that here.");
  }
  const auto space = command.find(' ');
  if (space != std::string::npos) {
    if (auto knife = parse_knife_step(command.substr(0, space))) {
      const std::string target = command.substr(space + 1);
      if (!inventory_.count(target) || target == kMeal) return invalid("You don't have that.");
      if (target == kKnife) return invalid("You can't do that.");
      if (!inventory_.count(std::string(kKnife))) return invalid("You need a knife for that.");
      return process(target, knife, std::nullopt, "");
    }
  }
  if (command.rfind("cook ", 0) == 0) {
    const auto in = command.rfind(" in ");
    if (in == std::string::npos || in < 5) return invalid("That is not a command I recognize.");
    const std::string target = command.substr(5, in - 5), appliance = command.substr(in + 4);
    if (!inventory_.count(target) || target == kMeal || target == kKnife) return invalid("You don't have that.");
    const bool present = std::any_of(furniture_.begin(), furniture_.end(), [&](const Furniture& f) {
      return f.room == agent_ && f.kind == FurnitureKind::kAppliance && f.name == appliance;
    });
    if (!present) return invalid("You don't see that here.");
    return process(target, std::nullopt, appliance_step(appliance), appliance);
  }
  if (command == "prepare meal") {
    if (!ready_to_prepare()) return invalid("You can't prepare the meal yet.");
    for (const auto& item : recipe_.items) inventory_.erase(item.name);
    inventory_.insert(std::string(kMeal));
    meal_prepared_ = true;
    return {"Adding the meal to your inventory."};
  }
  if (command == "eat meal") {
    if (!inventory_.count(std::string(kMeal))) return invalid("You don't have a meal to eat.");
    inventory_.erase(std::string(kMeal));
    meal_eaten_ = true;
    return {"You eat the meal.  It is delicious.", StepStatus::kOk, Outcome::kSuccess, ""};
  }
  return invalid("That is not a command I recognize.");
}

std::string CookingEnv::state_key() const {
  std::ostringstream out;
  out << agent_ << '|' << graph_.door_state() << '|';
  for (const auto& f : furniture_) {
    out << f.open << ':';
    for (const auto& c : f.contents) out << c << ',';
    out << ';';
  }
  out << '|';
  for (const auto& i : inventory_) out << i << ',';
  out << '|';
  for (const auto& [name, p] : progress_) out << name << p.knifed << p.cooked << ',';
  out << '|' << cookbook_read_ << meal_prepared_ << meal_eaten_;
  return out.str();
}

nlohmann::ordered_json CookingEnv::snapshot() const {
  nlohmann::ordered_json out;
  out["kind"] = "cooking";
  out["seed"] = seed_;
  out["difficulty"] = to_string(params_.difficulty);
  out["step_cap"] = step_cap();
  out["agent"] = graph_.name(agent_);
  out["graph"] = graph_.to_json();
  auto recipe = nlohmann::ordered_json::array();
  for (const auto& item : recipe_.items) {
    nlohmann::ordered_json r;
    r["name"] = item.name;
    r["knife"] = item.knife == KnifeStep::kNone ? "none" : to_string(item.knife);
    r["cook"] = item.cook == CookStep::kNone ? "none" : to_string(item.cook);
    recipe.push_back(std::move(r));
  }
  out["recipe"] = std::move(recipe);
  auto furniture = nlohmann::ordered_json::array();
  for (const auto& f : furniture_) {
    nlohmann::ordered_json j;
    j["name"] = f.name;
    j["kind"] = f.kind == FurnitureKind::kSurface ? "surface" : f.kind == FurnitureKind::kContainer ? "container" : "appliance";
    j["room"] = graph_.name(f.room);
    if (f.kind == FurnitureKind::kContainer) j["open"] = f.open;
    if (f.kind != FurnitureKind::kAppliance) j["contents"] = f.contents;
    furniture.push_back(std::move(j));
  }
  out["furniture"] = std::move(furniture);
  out["inventory"] = inventory_;
  out["cookbook_read"] = cookbook_read_;
  out["meal_prepared"] = meal_prepared_;
  out["meal_eaten"] = meal_eaten_;
  return out;
}

CookingEnv gen_cooking_env(std::uint64_t seed, Difficulty difficulty) {
  return CookingEnv(seed, difficulty == Difficulty::kEasy ? CookingParams::easy() : CookingParams::hard());
}

CookingEnv gen_cooking_env(std::uint64_t seed, const CookingParams& params) { return CookingEnv(seed, params); }

}  // namespace pddlego::envs
