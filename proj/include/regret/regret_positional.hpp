#pragma once

#include "regret/regret_all.hpp"

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace regret {

// What a play prefix reveals about a positional Adam: for each Adam vertex
// with a real choice, the target he was seen moving to (-1 if unseen).
// The allowed edge set E_A is E minus the other out-edges of seen vertices.
struct Knowledge {
  std::vector<int> fixed;
  bool allows(const WeightedArena& g, int u, int v) const;
  Knowledge after(const WeightedArena& g, int u, int v) const;  // knowledge after the move u -> v
  auto operator<=>(const Knowledge&) const = default;
};

Knowledge initial_knowledge(const WeightedArena& g);
Knowledge knowledge_of(const WeightedArena& g, const PlayPrefix& p);
EdgeSet edges_of(const WeightedArena& g, const Knowledge& k);
EdgeSet allowed_edges(const WeightedArena& g, const PlayPrefix& p);

// G restricted to the allowed edges, as a graph for the value solvers.
GameGraph restrict(const WeightedArena& g, const Knowledge& k);

// Every positional Adam strategy of the arena with its cVal(G x tau).
// Adam vertices of out-degree 1 are left implicit.
class AdamProfiles {
 public:
  explicit AdamProfiles(const WeightedArena& g, std::uint64_t limit = 1'000'000);
  int count() const { return (int)choice_.size(); }
  const std::vector<int>& choice(int t) const { return choice_[t]; }  // target per vertex, -1 if not Adam
  const std::vector<Rational>& cval(int t) const { return cval_[t]; }
  bool consistent(int t, const Knowledge& k) const;
  // cVal of u excluding the edge to v, in G x tau
  Rational cval_excluding(int t, int u, int v) const;
  PositionalStrategy strategy(int t) const { return {Player::Adam, choice_[t]}; }

 private:
  const WeightedArena* g_;
  std::vector<std::vector<int>> choice_;
  std::vector<std::vector<Rational>> cval_;
};

bool knowledge_bad_edge(const WeightedArena& g, const AdamProfiles& prof, const Knowledge& k, int u, int v);
bool knowledge_bad_edge(const WeightedArena& g, const Knowledge& k, int u, int v);

// Reachable part of the knowledge arena V x P(E), with B-tilde marked.
struct KnowledgeArena {
  std::vector<Knowledge> sets;             // interned knowledge sets
  std::vector<std::pair<int, int>> nodes;  // (vertex, set index)
  std::vector<std::vector<int>> succ;      // node indices
  std::vector<std::vector<bool>> bad;
  std::map<std::pair<int, int>, int> index;
  int find(int v, int set) const;
};

KnowledgeArena knowledge_arena(const WeightedArena& g, const AdamProfiles& prof,
                               std::uint64_t budget = 10'000'000);

struct ZeroRegretPositional {
  bool answer;
  KnowledgeArena arena;
  // per knowledge node: Eve's next vertex (finite-memory witness) when
  // answer holds, otherwise Adam's forcing move; -1 on the other player's nodes
  std::vector<int> witness;
};

ZeroRegretPositional zero_regret_positional(const WeightedArena& g, const SearchOptions& opt = {});

// Regret of the Eve witness (answer true) against every positional Adam.
Rational witness_regret(const WeightedArena& g, const ZeroRegretPositional& z);

// beta^|V| (beta^|V| - alpha^|V|)
mpz_class value_denominator(const WeightedArena& g);
// beta^|V| lcm_{1<=l<=|V|} (beta^l - alpha^l): every cVal of a sub-arena with
// integer weights is a multiple of its inverse
mpz_class value_denominator_lcm(const WeightedArena& g);

Rational lower_bound_b(const WeightedArena& g);
long horizon_nu(const WeightedArena& g, const Rational& b);

// Per Eve index i < |p|-1 of the prefix: v_i, v_{i+1} and D(i).
struct DeviationLedger {
  struct Entry {
    int i, v, next;
    Rational D;
  };
  std::vector<Entry> entries;
  Rational D_now;
  static DeviationLedger of(const PlayPrefix& p);
  // lambda^i (cVal^{v_i}_{not v_{i+1}} - Disc(p[i..])) for every entry, given
  // the excluded-edge values as a function of the entry
  template <class F>
  std::vector<Rational> candidates(const DiscountFactor& l, F&& cval_excl) const {
    std::vector<Rational> r;
    for (auto& e : entries) r.push_back(l.pow(e.i) * cval_excl(e) - (D_now - e.D));
    return r;
  }
};

// Play regret of a prefix, with cVal taken in G restricted to E_A(whole prefix).
Rational prefix_regret_positional(const WeightedArena& g, const PlayPrefix& p);

struct MaxRegret {
  std::vector<int> mrp;                 // Eve indices attaining the prefix regret
  std::vector<PositionalStrategy> mrs;  // consistent tau keeping one of them
};
MaxRegret mrp_mrs(const WeightedArena& g, const PlayPrefix& p);

struct PositionalOptions {
  bool zero_shortcut = true;  // return 0 straight from the safety game
  long cutoff = -1;           // leaf depth; must be >= the exact cutoff, -1 picks it
};

struct PositionalRegretResult {
  Rational value;
  long horizon = 0;  // nu(b_G), 0 when the value is 0
  long cutoff = 0;   // depth where the search switched to the closed form
  std::uint64_t nodes = 0;
};

PositionalRegretResult regret_positional(const WeightedArena& g, const SearchOptions& opt = {},
                                         const PositionalOptions& popt = {});

struct Interval {
  Rational low, high;
  bool contains(const Rational& x) const { return low <= x && x <= high; }
};

Interval oracle_interval_positional(const WeightedArena& g, int depth, const SearchOptions& opt = {});

}  // namespace regret
