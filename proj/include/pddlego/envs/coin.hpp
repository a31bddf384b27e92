#pragma once

#include <cstdint>

#include "pddlego/envs/environment.hpp"
#include "pddlego/envs/room_graph.hpp"

namespace pddlego::envs {

struct CoinParams {
  std::size_t rooms = 11;
  std::size_t step_cap = 50;
  LayoutParams layout;
};

/// Find the coin and pick it up. Commands: `move <dir>`, `open door to <dir>`, `take coin`.
class CoinEnv final : public Environment {
 public:
  CoinEnv(std::uint64_t seed, const CoinParams& params);

  EnvKind kind() const override { return EnvKind::kCoin; }
  std::unique_ptr<Environment> clone() const override { return std::make_unique<CoinEnv>(*this); }
  nlohmann::ordered_json snapshot() const override;
  std::string state_key() const override;
  std::string current_room() const override { return graph_.name(agent_); }
  std::vector<std::string> valid_actions() const override;

  const RoomGraph& graph() const { return graph_; }
  std::size_t start_room() const { return start_; }
  std::size_t agent_room() const { return agent_; }
  std::size_t coin_room() const { return coin_; }
  bool coin_taken() const { return taken_; }
  std::uint64_t seed() const { return seed_; }

 protected:
  std::string describe() const override;
  Transition apply(const std::string& command) override;

 private:
  std::uint64_t seed_;
  RoomGraph graph_;
  std::size_t start_ = 0;
  std::size_t agent_ = 0;
  std::size_t coin_ = 0;
  bool taken_ = false;
};

CoinEnv gen_coin_env(std::uint64_t seed, std::size_t rooms = 11);
CoinEnv gen_coin_env(std::uint64_t seed, const CoinParams& params);

/// Navigation commands shared by both games, in listing order.
std::vector<std::string> navigation_commands();

}  // namespace pddlego::envs
