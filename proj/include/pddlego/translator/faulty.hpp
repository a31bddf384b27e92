#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pddlego/envs/rng.hpp"
#include "pddlego/translator/translator.hpp"

namespace pddlego::translator {

enum class FaultKind { kDropFact, kUndeclaredObject, kSyntaxError, kDeleteVisited };

const char* to_string(FaultKind kind);
FaultKind parse_fault_kind(std::string_view text);

struct FaultProfile {
  double probability = 0.0;  // per call, in [0, 1]
  std::vector<FaultKind> kinds{FaultKind::kDropFact, FaultKind::kUndeclaredObject, FaultKind::kSyntaxError,
                               FaultKind::kDeleteVisited};
  std::uint64_t seed = 0;

  /// Throws PreconditionViolation for a probability outside [0, 1] or an empty kind list.
  void check() const;
};

struct Corruption {
  std::size_t call = 0;  // 0-based index of the translate() call
  FaultKind kind = FaultKind::kSyntaxError;
  std::string detail;
};

/// Wraps another translator and corrupts a seeded fraction of its outputs.
class FaultyTranslator : public Translator {
 public:
  FaultyTranslator(std::unique_ptr<Translator> inner, FaultProfile profile, std::uint64_t stream = 0);

  TranslatorResponse translate(const TranslatorRequest& request) override;
  std::string name() const override { return "faulty(" + inner_->name() + ")"; }

  const std::vector<Corruption>& log() const { return log_; }

 private:
  std::unique_ptr<Translator> inner_;
  FaultProfile profile_;
  envs::Rng rng_;
  std::size_t calls_ = 0;
  std::vector<Corruption> log_;
};

class FaultyFactory : public TranslatorFactory {
 public:
  FaultyFactory(std::shared_ptr<const TranslatorFactory> inner, FaultProfile profile);
  std::unique_ptr<Translator> make(std::uint64_t seed, int trial) const override;
  std::string name() const override { return "faulty"; }

 private:
  std::shared_ptr<const TranslatorFactory> inner_;
  FaultProfile profile_;
};

}  // namespace pddlego::translator
