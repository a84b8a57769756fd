#pragma once

#include "regret/regret_all.hpp"
#include "regret/regret_positional.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace regret {

// Positional resolution of the nondeterminism: a transition index per
// (state, symbol).
struct ResolutionStrategy {
  std::vector<std::vector<int>> choice;
  int operator()(int q, int a) const { return choice[q][a]; }
};

// The first transition everywhere.
ResolutionStrategy default_resolution(const WeightedAutomaton& a);

// cVal from (q_I, q_I) of the product pairing any run with sigma's run,
// weights w(run) - w(sigma).
Rational product_value(const WeightedAutomaton& a, const ResolutionStrategy& s);
Rational strategy_regret_word(const WeightedAutomaton& a, const ResolutionStrategy& s);

struct ZeroRegretWord {
  bool answer;
  std::optional<ResolutionStrategy> witness;
  std::uint64_t nodes = 0;
};

// Backtracking over the (state, symbol) pairs the resolution can reach, in
// canonical order, pruned by a finite-horizon lower bound on the regret.
ZeroRegretWord zero_regret_word(const WeightedAutomaton& a, const SearchOptions& opt = {});

// Best run values after reading a finite word: per state, the largest
// discounted sum of a run ending there, absent if no run does.
using SubsetMap = std::vector<std::optional<Rational>>;
SubsetMap subset_start(const WeightedAutomaton& a);
SubsetMap subset_step(const WeightedAutomaton& a, const SubsetMap& f, int symbol, int step);

// Least N with lambda^N W / (1 - lambda) < eps / 4.
int epsilon_horizon(const WeightedAutomaton& a, const Rational& eps);

struct EpsilonGap {
  bool yes;
  int horizon;
  std::uint64_t states;
};

EpsilonGap epsilon_gap(const WeightedAutomaton& a, const Rational& r, const Rational& eps, const SearchOptions& opt = {});

// Brackets the regret against word strategies over all Eve strategies.
Interval oracle_interval_word(const WeightedAutomaton& a, int depth, const SearchOptions& opt = {});

}  // namespace regret
