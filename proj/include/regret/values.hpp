#pragma once

#include "regret/core.hpp"

#include <vector>

namespace regret {

// Loose game graph used internally: parallel edges and single-successor Eve
// vertices are fine here.  Arenas, knowledge arenas and automaton products
// are all lowered to this.
struct GameGraph {
  struct Arc {
    int dst;
    Rational w;
  };
  Rational lambda;
  std::vector<Player> owner;
  std::vector<std::vector<Arc>> succ;

  int size() const { return (int)owner.size(); }
  int add_vertex(Player p) {
    owner.push_back(p);
    succ.emplace_back();
    return size() - 1;
  }
};

GameGraph to_graph(const WeightedArena& g);

// A policy picks one arc index per vertex.  Values of all vertices under it.
std::vector<Rational> evaluate_policy(const GameGraph& g, const std::vector<int>& policy);

enum class Objective { Max, Min };
// Every vertex optimizes the same way (cVal for Max, the all-minimize value for Min).
std::vector<Rational> one_player_values(const GameGraph& g, Objective obj, std::vector<int>* policy = nullptr);
// Eve maximizes, Adam minimizes.  Optional outputs are optimal positional policies.
std::vector<Rational> antagonistic_values(const GameGraph& g, std::vector<int>* eve_policy = nullptr,
                                          std::vector<int>* adam_policy = nullptr);

struct ValueTable {
  std::vector<Rational> aval, cval;
};

struct PositionalStrategy {
  Player owner = Player::Eve;
  std::vector<int> choice;  // target vertex, -1 for vertices of the other player
  int operator()(int v) const { return choice[v]; }
};

struct CanonicalStrategies {
  PositionalStrategy sigma_wc, tau_wc, sigma_co, sigma_cw;
  std::vector<std::vector<int>> copt, wcopt;  // per Eve vertex, targets
};

std::vector<Rational> coop_value(const WeightedArena& g);
std::vector<Rational> antag_value(const WeightedArena& g);
// all-minimize value: a lower bound on every play's payoff
std::vector<Rational> min_value(const WeightedArena& g);
ValueTable compute_values(const WeightedArena& g);

Rational coop_value_excluding(const WeightedArena& g, const ValueTable& vt, int u, int v);
CanonicalStrategies canonical_strategies(const WeightedArena& g, const ValueTable& vt);

// Payoff of the lasso generated by two positional strategies from `from`.
Rational play_value(const WeightedArena& g, const PositionalStrategy& eve, const PositionalStrategy& adam, int from);

}  // namespace regret
