#include "pddlego/translator/faulty.hpp"

#include "pddlego/edit/delta.hpp"
#include "pddlego/error.hpp"
#include "pddlego/pddl/parser.hpp"
#include "pddlego/pddl/printer.hpp"

namespace pddlego::translator {
namespace {

constexpr std::string_view kGhost = "ghost_room";

/// Index of the entry to drop, preferring `connected` facts.
std::optional<std::size_t> pick_fact(const std::vector<std::string>& lines, envs::Rng& rng) {
  std::vector<std::size_t> connected;
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (lines[i].rfind("(connected ", 0) == 0) connected.push_back(i);
  if (!connected.empty()) return rng.choice(connected);
  if (lines.empty()) return std::nullopt;
  return rng.below(lines.size());
}

std::string corrupt_delta(const std::string& text, FaultKind kind, const TranslatorRequest& request, envs::Rng& rng,
                          std::string& detail) {
  edit::Delta delta = edit::parse_delta_json(text);
  switch (kind) {
    case FaultKind::kSyntaxError:
      detail = "truncated json";
      return text.substr(0, text.size() / 2);
    case FaultKind::kDropFact: {
      auto i = pick_fact(delta.init.add, rng);
      if (!i) {
        detail = "nothing to drop";
        return text;
      }
      detail = delta.init.add[*i];
      delta.init.add.erase(delta.init.add.begin() + static_cast<std::ptrdiff_t>(*i));
      break;
    }
    case FaultKind::kUndeclaredObject:
      detail = "(visited " + std::string(kGhost) + ")";
      delta.init.add.push_back(detail);
      break;
    case FaultKind::kDeleteVisited: {
      auto prior = pddl::parse_problem(request.prior_problem);
      auto visited = prior.facts("visited");
      if (visited.empty()) {
        detail = "no visited fact";
        return text;
      }
      detail = pddl::to_string(rng.choice(visited));
      delta.init.remove.push_back(detail);
      break;
    }
  }
  return edit::to_json(delta);
}

std::string corrupt_problem(const std::string& text, FaultKind kind, envs::Rng& rng, std::string& detail) {
  if (kind == FaultKind::kSyntaxError) {
    detail = "unbalanced parentheses";
    return text.substr(0, text.rfind(')'));
  }
  auto pf = pddl::parse_problem(text);
  switch (kind) {
    case FaultKind::kDropFact: {
      std::vector<std::string> lines;
      for (const auto& a : pf.init) lines.push_back(pddl::to_string(a));
      auto i = pick_fact(lines, rng);
      if (!i) {
        detail = "nothing to drop";
        return text;
      }
      detail = lines[*i];
      pf.init.erase(pddl::parse_atom(lines[*i]));
      break;
    }
    case FaultKind::kUndeclaredObject:
      detail = "(visited " + std::string(kGhost) + ")";
      pf.init.insert(pddl::parse_atom(detail));
      break;
    case FaultKind::kDeleteVisited: {
      auto visited = pf.facts("visited");
      if (visited.empty()) {
        detail = "no visited fact";
        return text;
      }
      const auto victim = rng.choice(visited);
      detail = pddl::to_string(victim);
      pf.init.erase(victim);
      break;
    }
    case FaultKind::kSyntaxError: break;
  }
  return pddl::print_problem(pf);
}

}  // namespace

const char* to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::kDropFact: return "drop-fact";
    case FaultKind::kUndeclaredObject: return "undeclared-object";
    case FaultKind::kSyntaxError: return "syntax-error";
    case FaultKind::kDeleteVisited: return "delete-visited";
  }
  return "?";
}

FaultKind parse_fault_kind(std::string_view text) {
  for (auto k : {FaultKind::kDropFact, FaultKind::kUndeclaredObject, FaultKind::kSyntaxError,
                 FaultKind::kDeleteVisited})
    if (text == to_string(k)) return k;
  throw Error("unknown fault kind: " + std::string(text));
}

void FaultProfile::check() const {
  if (!(probability >= 0.0 && probability <= 1.0)) throw PreconditionViolation("fault probability must be in [0, 1]");
  if (kinds.empty()) throw PreconditionViolation("fault profile needs at least one kind");
}

FaultyTranslator::FaultyTranslator(std::unique_ptr<Translator> inner, FaultProfile profile, std::uint64_t stream)
    : inner_(std::move(inner)), profile_(std::move(profile)), rng_(envs::mix_seed({profile_.seed, stream, 0xfa17})) {
  profile_.check();
}

TranslatorResponse FaultyTranslator::translate(const TranslatorRequest& request) {
  TranslatorResponse response = inner_->translate(request);
  const std::size_t call = calls_++;
  if (!rng_.chance(profile_.probability)) return response;
  const FaultKind kind = rng_.choice(profile_.kinds);
  std::string detail;
  switch (response.mode) {
    case Mode::kDelta: response.text = corrupt_delta(response.text, kind, request, rng_, detail); break;
    case Mode::kInitProblem: response.text = corrupt_problem(response.text, kind, rng_, detail); break;
    case Mode::kAction:
      detail = "garbled command";
      response.text = "xyzzy";
      break;
  }
  response.raw = response.text;
  log_.push_back({call, kind, detail});
  return response;
}

FaultyFactory::FaultyFactory(std::shared_ptr<const TranslatorFactory> inner, FaultProfile profile)
    : inner_(std::move(inner)), profile_(std::move(profile)) {
  profile_.check();
}

std::unique_ptr<Translator> FaultyFactory::make(std::uint64_t seed, int trial) const {
  return std::make_unique<FaultyTranslator>(inner_->make(seed, trial), profile_,
                                            envs::mix_seed({seed, static_cast<std::uint64_t>(trial)}));
}

}  // namespace pddlego::translator
