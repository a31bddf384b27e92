#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pddlego/envs/room_graph.hpp"

namespace pddlego::envs {

enum class EnvKind { kCoin, kCooking };
enum class Difficulty { kEasy, kHard };

const char* to_string(EnvKind kind);
const char* to_string(Difficulty difficulty);
EnvKind parse_env_kind(std::string_view text);
Difficulty parse_difficulty(std::string_view text);

enum class Outcome { kOngoing, kSuccess, kFailure };

struct Observation {
  std::string text;
  std::vector<std::string> valid_actions;  // empty once terminal
  Outcome outcome = Outcome::kOngoing;
  std::string failure_reason;

  bool ongoing() const { return outcome == Outcome::kOngoing; }
};

enum class StepStatus { kOk, kInvalid };

struct StepResult {
  Observation observation;
  StepStatus status = StepStatus::kOk;
};

/// A seeded text game. Each instance is single-owner mutable state.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual EnvKind kind() const = 0;

  /// Description of the current room and the valid actions. Free: no step is consumed.
  Observation observe() const;

  /// Executes one command. Every call consumes a step, including rejected
  /// ones, which leave the world unchanged. Reaching the cap without success
  /// is a terminal failure. Throws PreconditionViolation once terminal.
  StepResult step(std::string_view command);

  std::size_t steps_taken() const { return steps_; }
  std::size_t step_cap() const { return cap_; }
  Outcome outcome() const { return outcome_; }

  virtual std::unique_ptr<Environment> clone() const = 0;
  virtual nlohmann::ordered_json snapshot() const = 0;

  /// Serialized world state, excluding the step counter.
  virtual std::string state_key() const = 0;
  std::uint64_t state_hash() const;

  virtual std::string current_room() const = 0;

  /// Commands accepted by step() in the current state.
  virtual std::vector<std::string> valid_actions() const = 0;

 protected:
  explicit Environment(std::size_t cap) : cap_(cap) {}

  struct Transition {
    Transition(std::string text, StepStatus status = StepStatus::kOk, Outcome outcome = Outcome::kOngoing,
               std::string failure_reason = {})
        : text(std::move(text)), status(status), outcome(outcome), failure_reason(std::move(failure_reason)) {}

    std::string text;
    StepStatus status;
    Outcome outcome;
    std::string failure_reason;
  };

  static Transition invalid(std::string text) { return {std::move(text), StepStatus::kInvalid}; }

  /// Handles `move <dir>` and `open door to <dir>`; nullopt for any other command.
  static std::optional<Transition> navigate(RoomGraph& graph, std::size_t& agent, const std::string& command,
                                            const std::function<std::string()>& describe_room);

  virtual std::string describe() const = 0;
  virtual Transition apply(const std::string& command) = 0;

 private:
  std::size_t steps_ = 0;
  std::size_t cap_;
  Outcome outcome_ = Outcome::kOngoing;
  std::string failure_reason_;
};

/// `> obs` / `< cmd` log of running `commands` on a copy of `env`. Lines of
/// a multi-line observation after the first are not prefixed. Commands past
/// a terminal observation are dropped.
std::string transcript(const Environment& env, const std::vector<std::string>& commands);

/// Formats one exchange in the log format; an empty command yields only the observation.
std::string transcript_entry(std::string_view command, std::string_view observation);

}  // namespace pddlego::envs
