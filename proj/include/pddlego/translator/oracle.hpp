#pragma once

#include <string>

#include "pddlego/pddl/ast.hpp"
#include "pddlego/translator/translator.hpp"

namespace pddlego::translator {

struct OracleOptions {
  /// Placeholder objects are named `<prefix><n>`; "loc" gives loc1, loc2, ...
  std::string placeholder_prefix = "unk_";
};

/// Exact translator for the shipped environments. It reads only the
/// transcript text, never the environment's internals.
///
/// Unseen rooms behind closed doors become placeholders. Exits are matched
/// to known locations by dead reckoning over the recorded `connected` facts,
/// which is exact because every passage joins two grid neighbours.
class OracleTranslator : public Translator {
 public:
  explicit OracleTranslator(OracleOptions options = {});

  TranslatorResponse translate(const TranslatorRequest& request) override;
  std::string name() const override { return "oracle"; }

 private:
  OracleOptions options_;
  int counter_ = 0;
};

class OracleFactory : public TranslatorFactory {
 public:
  explicit OracleFactory(OracleOptions options = {}) : options_(std::move(options)) {}
  std::unique_ptr<Translator> make(std::uint64_t seed, int trial) const override;
  std::string name() const override { return "oracle"; }

 private:
  OracleOptions options_;
};

/// Empty problem with the four directions and the environment's problem name.
pddl::ProblemFile problem_skeleton(envs::EnvKind env);

}  // namespace pddlego::translator
