#pragma once

#include "regret/safety.hpp"
#include "regret/values.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace regret {

using EdgeSet = std::set<std::pair<int, int>>;

struct SearchOptions {
  std::uint64_t budget = 10'000'000;  // expanded search nodes
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t nodes, int depth)
      : std::runtime_error("node budget exceeded after " + std::to_string(nodes) + " nodes (depth " +
                           std::to_string(depth) + ")"),
        nodes(nodes), depth(depth) {}
  std::uint64_t nodes;
  int depth;
};

struct ZeroRegretAll {
  bool answer;
  PositionalStrategy witness;  // Eve's safe strategy, or Adam's forcing strategy
};

struct RegretResult {
  Rational value;
  int horizon = 0;
  std::uint64_t nodes = 0;
};

// A play stem.cycle^omega, given as vertex sequences; cycle non-empty and
// closing back to its first vertex.
struct Lasso {
  std::vector<int> stem, cycle;
  int at(long i) const;
};

EdgeSet bad_edges(const WeightedArena& g, const ValueTable& vt);
ZeroRegretAll zero_regret_all(const WeightedArena& g);
Rational lower_bound_a(const WeightedArena& g);
int horizon_N(const Rational& r, const Rational& W, const DiscountFactor& l);

Rational locreg(const WeightedArena& g, const ValueTable& vt, const PlayPrefix& prefix, int i);
Rational locreg(const WeightedArena& g, const ValueTable& vt, const Lasso& play, int i);
Rational prefix_regret(const WeightedArena& g, const ValueTable& vt, const PlayPrefix& prefix);

// horizon < 0 means N(a_G).
RegretResult regret_all(const WeightedArena& g, const SearchOptions& opt = {}, int horizon = -1);
bool regret_threshold_all(const WeightedArena& g, const Rational& r, bool strict, const SearchOptions& opt = {});
// Plain min-max over raw prefixes of the given length, recomputing prefix
// regret at each leaf.  Exponential; only for cross-checking.
Rational regret_all_naive(const WeightedArena& g, int horizon);

struct OTPStrategy {
  DiscountFactor lambda;
  PositionalStrategy sigma_co, sigma_cw;
  Rational t;
  std::vector<bool> eligible;     // |copt(u)| = 1
  std::vector<Rational> pending;  // per Eve vertex: locreg of taking sigma_cw, undiscounted
  long switch_depth = 0;          // from here on the choice no longer depends on the turn
  int choose(int v, long depth) const;
};

OTPStrategy synth_otp(const WeightedArena& g, const Rational& t);

// Eve strategy that reads the turn counter until depth k, then plays `post`.
struct CounterStrategy {
  long k = 0;
  std::vector<std::vector<int>> table;  // table[d][v] target for d < k
  PositionalStrategy post;
  int choose(int v, long d) const { return d < k ? table[d][v] : post(v); }
};

CounterStrategy to_counter(const WeightedArena& g, const OTPStrategy& s);
// check_post: require post to be worst-case optimal (pointwise aVal check).
Rational eval_strategy_regret(const WeightedArena& g, const CounterStrategy& s, bool check_post = true,
                              const SearchOptions& opt = {});
Rational eval_strategy_regret(const WeightedArena& g, const OTPStrategy& s, const SearchOptions& opt = {});

}  // namespace regret
