#include "pddlego/envs/environment.hpp"

#include "pddlego/envs/text.hpp"
#include "pddlego/error.hpp"

namespace pddlego::envs {

const char* to_string(EnvKind kind) { return kind == EnvKind::kCoin ? "coin" : "cooking"; }

const char* to_string(Difficulty difficulty) { return difficulty == Difficulty::kEasy ? "easy" : "hard"; }

EnvKind parse_env_kind(std::string_view text) {
  if (text == "coin") return EnvKind::kCoin;
  if (text == "cooking") return EnvKind::kCooking;
  throw Error("unknown environment '" + std::string(text) + "' (expected coin or cooking)");
}

Difficulty parse_difficulty(std::string_view text) {
  if (text == "easy") return Difficulty::kEasy;
  if (text == "hard") return Difficulty::kHard;
  throw Error("unknown difficulty '" + std::string(text) + "' (expected easy or hard)");
}

Observation Environment::observe() const {
  Observation obs;
  obs.text = describe();
  obs.outcome = outcome_;
  obs.failure_reason = failure_reason_;
  if (outcome_ == Outcome::kOngoing) obs.valid_actions = valid_actions();
  return obs;
}

StepResult Environment::step(std::string_view command) {
  if (outcome_ != Outcome::kOngoing) throw PreconditionViolation("step on a finished episode");
  Transition t = apply(normalize_command(command));
  ++steps_;
  outcome_ = t.outcome;
  failure_reason_ = t.failure_reason;
  if (outcome_ == Outcome::kOngoing && steps_ >= cap_) {
    outcome_ = Outcome::kFailure;
    failure_reason_ = "step cap of " + std::to_string(cap_) + " reached";
  }
  StepResult result;
  result.status = t.status;
  result.observation.text = std::move(t.text);
  result.observation.outcome = outcome_;
  result.observation.failure_reason = failure_reason_;
  if (outcome_ == Outcome::kOngoing) result.observation.valid_actions = valid_actions();
  return result;
}

std::optional<Environment::Transition> Environment::navigate(RoomGraph& graph, std::size_t& agent,
                                                             const std::string& command,
                                                             const std::function<std::string()>& describe_room) {
  if (command.rfind("move ", 0) == 0) {
    auto dir = parse_direction(command.substr(5));
    if (!dir) return invalid("That is not a command I recognize.");
    const Passage* p = graph.passage(agent, *dir);
    if (!p) return invalid("You can't go that way.");
    if (p->door == Door::kClosed) return invalid("You can't move there, the door is closed.");
    agent = p->to;
    return Transition{describe_room()};
  }
  if (command.rfind("open door to ", 0) == 0) {
    auto dir = parse_direction(command.substr(13));
    if (!dir) return invalid("That is not a command I recognize.");
    const Passage* p = graph.passage(agent, *dir);
    if (!p || p->door == Door::kNone) return invalid("There is no door to the " + std::string(to_string(*dir)) + ".");
    if (p->door == Door::kOpen) return invalid("That door is already open.");
    std::string text = "You open the " + p->material + " door, revealing the " + graph.name(p->to) + ".";
    graph.open_door(agent, *dir);
    return Transition{std::move(text)};
  }
  return std::nullopt;
}

std::uint64_t Environment::state_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : state_key()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string transcript_entry(std::string_view command, std::string_view observation) {
  std::string out;
  if (!command.empty()) out += "< " + std::string(command) + "\n";
  out += "> " + std::string(observation) + "\n";
  return out;
}

std::string transcript(const Environment& env, const std::vector<std::string>& commands) {
  auto copy = env.clone();
  std::string out = transcript_entry("", copy->observe().text);
  for (const auto& command : commands) {
    if (copy->outcome() != Outcome::kOngoing) break;
    out += transcript_entry(command, copy->step(command).observation.text);
  }
  return out;
}

}  // namespace pddlego::envs
