#include "pddlego/translator/translator.hpp"

#include "pddlego/error.hpp"

namespace pddlego::translator {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::kInitProblem: return "init-problem";
    case Mode::kDelta: return "delta";
    case Mode::kAction: return "action";
  }
  return "?";
}

void TranslatorRequest::check() const {
  if (mode == Mode::kDelta && prior_problem.empty())
    throw PreconditionViolation("delta request needs the prior problem file");
  if (mode == Mode::kAction && valid_actions.empty())
    throw PreconditionViolation("action request needs at least one valid action");
}

}  // namespace pddlego::translator
