#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pddlego/envs/environment.hpp"

namespace pddlego::translator {

enum class Mode { kInitProblem, kDelta, kAction };

const char* to_string(Mode mode);

/// One call across the translator boundary.
///
/// `observation` is a transcript segment (`> obs` / `< cmd` lines) covering
/// everything since the previous translation. In init mode an optional
/// `prior_problem` turns the call into a full regeneration.
struct TranslatorRequest {
  Mode mode = Mode::kInitProblem;
  envs::EnvKind env = envs::EnvKind::kCoin;
  std::string observation;
  std::string prior_problem;
  std::vector<std::string> history;  // action mode: earlier `< cmd` / `> obs` turns
  std::vector<std::string> valid_actions;

  /// Throws PreconditionViolation when delta mode lacks a prior problem or
  /// action mode lacks valid actions.
  void check() const;
};

/// `text` is a problem file, a delta JSON document or a command, per `mode`.
struct TranslatorResponse {
  Mode mode = Mode::kInitProblem;
  std::string text;
  std::string raw;  // untouched model output, kept for traces
};

/// Observation-to-PDDL capability. An instance serves one episode, so
/// implementations may keep per-episode state such as placeholder counters.
class Translator {
 public:
  virtual ~Translator() = default;
  virtual TranslatorResponse translate(const TranslatorRequest& request) = 0;
  virtual std::string name() const = 0;
};

/// Makes a fresh translator for the episode with the given seed and trial.
class TranslatorFactory {
 public:
  virtual ~TranslatorFactory() = default;
  virtual std::unique_ptr<Translator> make(std::uint64_t seed, int trial) const = 0;
  virtual std::string name() const = 0;
};

}  // namespace pddlego::translator
