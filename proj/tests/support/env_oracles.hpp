#pragma once

// Brute-force solvers over environment internals. They read the generator's
// ground truth directly and share no code with the translator or agent.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pddlego/envs/coin.hpp"
#include "pddlego/envs/cooking.hpp"

namespace pddlego::testing {

/// Shortest number of commands that ends a Coin episode in success, found by
/// BFS over the environment's own transitions (state = state_key()).
inline std::optional<std::size_t> coin_shortest_success(const envs::CoinEnv& env) {
  std::unordered_map<std::string, std::size_t> dist;
  std::deque<std::unique_ptr<envs::Environment>> queue;
  dist[env.state_key()] = 0;
  queue.push_back(env.clone());
  while (!queue.empty()) {
    auto cur = std::move(queue.front());
    queue.pop_front();
    const std::size_t d = dist[cur->state_key()];
    for (const auto& cmd : cur->valid_actions()) {
      auto next = cur->clone();
      auto r = next->step(cmd);
      if (r.observation.outcome == envs::Outcome::kSuccess) return d + 1;
      if (r.status == envs::StepStatus::kInvalid) continue;
      if (dist.emplace(next->state_key(), d + 1).second) queue.push_back(std::move(next));
    }
  }
  return std::nullopt;
}

/// Fewest commands that win a fresh Cooking game with full knowledge of the
/// layout. BFS over (room, opened doors, opened containers, held items,
/// cooked items); knife steps, `prepare meal` and `eat meal` are added as
/// constants since they can run anywhere once the ingredient and knife are held.
inline std::optional<std::size_t> cooking_shortest_success(const envs::CookingEnv& env) {
  using envs::CookStep;
  using envs::Door;
  using envs::FurnitureKind;
  using envs::KnifeStep;
  const auto& graph = env.graph();
  const auto& recipe = env.recipe();
  const auto& furniture = env.furniture();

  std::vector<std::string> needed;
  for (const auto& item : recipe.items) needed.push_back(item.name);
  const bool knife = recipe.needs_knife();
  if (knife) needed.emplace_back("knife");
  std::size_t knife_steps = 0;
  for (const auto& item : recipe.items) knife_steps += item.knife != KnifeStep::kNone;

  // Doors, indexed per unordered passage.
  std::map<std::pair<std::size_t, int>, int> door_id;
  int doors = 0;
  std::uint64_t doors_open0 = 0;
  for (std::size_t r = 0; r < graph.size(); ++r)
    for (auto d : envs::kDirections) {
      const auto* p = graph.passage(r, d);
      if (!p || p->door == Door::kNone) continue;
      auto back = std::make_pair(p->to, static_cast<int>(envs::reverse(d)));
      if (door_id.count(back)) {
        door_id[{r, static_cast<int>(d)}] = door_id[back];
        continue;
      }
      if (p->door == Door::kOpen) doors_open0 |= 1ULL << doors;
      door_id[{r, static_cast<int>(d)}] = doors++;
    }

  // Containers that hold something needed.
  std::vector<std::size_t> holder(needed.size());
  std::map<std::size_t, int> container_id;
  for (std::size_t i = 0; i < needed.size(); ++i) {
    holder[i] = *env.holder_of(needed[i]);
    if (furniture[holder[i]].kind == FurnitureKind::kContainer && !container_id.count(holder[i])) {
      const int id = static_cast<int>(container_id.size());
      container_id[holder[i]] = id;
    }
  }
  const int n_items = static_cast<int>(needed.size());
  const int n_cont = static_cast<int>(container_id.size());

  struct State {
    std::size_t room;
    std::uint64_t doors, containers, held, cooked;
  };
  auto key = [&](const State& s) {
    return (((((s.room << doors) | s.doors) << n_cont | s.containers) << n_items | s.held) << recipe.items.size()) |
           s.cooked;
  };
  std::uint64_t all_held = (1ULL << n_items) - 1, all_cooked = 0;
  for (std::size_t i = 0; i < recipe.items.size(); ++i)
    if (recipe.items[i].cook != CookStep::kNone) all_cooked |= 1ULL << i;
  const std::size_t kitchen = *graph.find("kitchen");
  const int knife_index = knife ? n_items - 1 : -1;

  std::unordered_map<std::uint64_t, std::size_t> dist;
  std::deque<State> queue;
  State s0{env.agent_room(), doors_open0, 0, 0, 0};
  dist[key(s0)] = 0;
  queue.push_back(s0);
  while (!queue.empty()) {
    const State s = queue.front();
    queue.pop_front();
    const std::size_t d = dist[key(s)];
    if (s.room == kitchen && s.held == all_held && s.cooked == all_cooked) return d + knife_steps + 2;
    std::vector<State> next;
    for (auto dir : envs::kDirections) {
      const auto* p = graph.passage(s.room, dir);
      if (!p) continue;
      if (p->door == Door::kNone) {
        next.push_back({p->to, s.doors, s.containers, s.held, s.cooked});
        continue;
      }
      const int id = door_id[{s.room, static_cast<int>(dir)}];
      if (s.doors >> id & 1) next.push_back({p->to, s.doors, s.containers, s.held, s.cooked});
      else next.push_back({s.room, s.doors | 1ULL << id, s.containers, s.held, s.cooked});
    }
    for (const auto& [f, id] : container_id)
      if (furniture[f].room == s.room && !(s.containers >> id & 1))
        next.push_back({s.room, s.doors, s.containers | 1ULL << id, s.held, s.cooked});
    for (int i = 0; i < n_items; ++i) {
      if (s.held >> i & 1) continue;
      const auto& f = furniture[holder[i]];
      if (f.room != s.room) continue;
      if (f.kind == FurnitureKind::kContainer && !(s.containers >> container_id[holder[i]] & 1)) continue;
      next.push_back({s.room, s.doors, s.containers, s.held | 1ULL << i, s.cooked});
    }
    for (std::size_t i = 0; i < recipe.items.size(); ++i) {
      const auto& item = recipe.items[i];
      if (item.cook == CookStep::kNone || (s.cooked >> i & 1) || !(s.held >> i & 1)) continue;
      if (item.knife != KnifeStep::kNone && !(s.held >> knife_index & 1)) continue;
      for (const auto& f : furniture)
        if (f.room == s.room && f.kind == FurnitureKind::kAppliance && envs::appliance_step(f.name) == item.cook) {
          next.push_back({s.room, s.doors, s.containers, s.held, s.cooked | 1ULL << i});
          break;
        }
    }
    for (const auto& t : next)
      if (dist.emplace(key(t), d + 1).second) queue.push_back(t);
  }
  return std::nullopt;
}

}  // namespace pddlego::testing
