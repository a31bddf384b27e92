#include "pddlego/envs/coin.hpp"

#include "pddlego/envs/text.hpp"
#include "pddlego/error.hpp"

namespace pddlego::envs {
namespace {

const std::vector<std::string>& coin_room_names() {
  static const std::vector<std::string> names = {
      "kitchen", "pantry",   "corridor", "bedroom",   "living room", "bathroom", "laundry room",
      "backyard", "driveway", "street",  "supermarket", "garage",    "study",    "dining room",
      "hallway", "attic",    "basement", "office",    "nursery",     "sunroom"};
  return names;
}

}  // namespace

std::vector<std::string> navigation_commands() {
  std::vector<std::string> out;
  for (Direction d : kDirections) out.push_back(std::string("move ") + to_string(d));
  for (Direction d : kDirections) out.push_back(std::string("open door to ") + to_string(d));
  return out;
}

CoinEnv::CoinEnv(std::uint64_t seed, const CoinParams& params) : Environment(params.step_cap), seed_(seed) {
  if (params.rooms < 1) throw PreconditionViolation("coin environment needs at least one room");
  if (params.rooms > coin_room_names().size())
    throw PreconditionViolation("coin environment supports at most " + std::to_string(coin_room_names().size()) +
                                " rooms");
  Rng rng(mix_seed({seed, params.rooms, 0xc011}));
  std::vector<std::string> names = coin_room_names();
  rng.shuffle(names);
  names.resize(params.rooms);
  graph_ = generate_layout(rng, names, params.layout);
  start_ = agent_ = 0;
  coin_ = params.rooms == 1 ? 0 : 1 + rng.below(params.rooms - 1);
}

std::string CoinEnv::describe() const {
  std::string out = "You are in the " + graph_.name(agent_) + ".";
  if (agent_ == coin_ && !taken_) out += " In one part of the room you see a coin.";
  const std::string exits = graph_.exits_text(agent_);
  if (!exits.empty()) out += " " + exits;
  return out;
}

std::vector<std::string> CoinEnv::valid_actions() const {
  std::vector<std::string> out = navigation_commands();
  if (agent_ == coin_ && !taken_) out.push_back("take coin");
  return out;
}

Environment::Transition CoinEnv::apply(const std::string& command) {
  if (auto nav = navigate(graph_, agent_, command, [this] { return describe(); })) return *nav;
  if (command == "take coin") {
    if (agent_ != coin_ || taken_) return invalid("You don't see that here.");
    taken_ = true;
    return {"You take the coin.", StepStatus::kOk, Outcome::kSuccess, ""};
  }
  return invalid("That is not a command I recognize.");
}

std::string CoinEnv::state_key() const {
  return std::to_string(agent_) + "|" + std::to_string(taken_) + "|" + graph_.door_state();
}

nlohmann::ordered_json CoinEnv::snapshot() const {
  nlohmann::ordered_json out;
  out["kind"] = "coin";
  out["seed"] = seed_;
  out["step_cap"] = step_cap();
  out["start"] = graph_.name(start_);
  out["coin_room"] = graph_.name(coin_);
  out["agent"] = graph_.name(agent_);
  out["coin_taken"] = taken_;
  out["graph"] = graph_.to_json();
  return out;
}

CoinEnv gen_coin_env(std::uint64_t seed, std::size_t rooms) {
  CoinParams params;
  params.rooms = rooms;
  return CoinEnv(seed, params);
}

CoinEnv gen_coin_env(std::uint64_t seed, const CoinParams& params) { return CoinEnv(seed, params); }

}  // namespace pddlego::envs
