#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

#include "pddlego/planner/ground.hpp"

namespace pddlego::planner {

struct SearchLimits {
  enum class Mode {
    kBreadthFirst,     // optimal for unit costs; the default
    kGreedyGoalCount,  // greedy best-first on unsatisfied top-level goal conjuncts
  };

  std::size_t max_expansions = 2'000'000;
  std::chrono::milliseconds timeout{60'000};
  Mode mode = Mode::kBreadthFirst;
};

struct Plan {
  std::vector<GroundAction> steps;

  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
};

enum class SolveStatus { kPlan, kUnsolvable, kResourceExhausted };

const char* to_string(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::kUnsolvable;
  Plan plan;  // meaningful only for kPlan
  std::size_t expansions = 0;
  std::size_t generated = 0;

  bool found() const { return status == SolveStatus::kPlan; }
};

/// Forward state-space search. Successors are generated in the task's
/// (name, args) action order, so equal tasks yield byte-identical plans.
/// Static facts are compiled out and actions that cannot influence the goal
/// are pruned before search; neither changes the optimal plan length.
/// kUnsolvable means the reachable space was exhausted; kResourceExhausted
/// means a limit was hit first.
SolveResult solve(const GroundTask& task, const SearchLimits& limits = {});

struct PlanCheck {
  bool ok = true;
  std::size_t step = 0;  // failing step; equals plan size when the goal fails
  std::string reason;
};

/// Simulates `plan` from the initial state of `task`.
PlanCheck validate_plan(const GroundTask& task, const Plan& plan);

/// One action per line, e.g. `(open_door kitchen loc1)`.
std::string format_plan(const Plan& plan);

}  // namespace pddlego::planner
