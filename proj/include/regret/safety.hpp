#pragma once

#include "regret/core.hpp"

#include <set>
#include <vector>

namespace regret {

// Unweighted game with bad arcs.  succ/bad are parallel arrays.
struct SafetyGame {
  std::vector<Player> owner;
  std::vector<std::vector<int>> succ;
  std::vector<std::vector<bool>> bad;
  int init = 0;
  int size() const { return (int)owner.size(); }
};

struct SafetyResult {
  Player winner;
  std::vector<bool> adam_wins;  // Adam's attractor to a bad arc
  std::vector<int> rank;        // attractor layer, -1 outside
  // arc index per vertex: Eve's safe choice on her vertices, Adam's forcing
  // choice on his losing-for-Eve vertices; first arc elsewhere
  std::vector<int> eve_strategy, adam_strategy;
};

SafetyGame safety_game(const WeightedArena& g, const std::set<std::pair<int, int>>& bad);
SafetyResult solve_safety(const SafetyGame& game);

}  // namespace regret
