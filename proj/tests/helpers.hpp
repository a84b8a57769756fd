#pragma once

#include "regret/core.hpp"

#include <random>
#include <set>
#include <string>

namespace testing_support {

using namespace regret;

inline std::string fixture(const std::string& name) { return read_file(std::string(FIXTURE_DIR) + "/" + name); }
inline WeightedArena bigmem() { return parse_arena(fixture("bigmem.arena")); }
inline WeightedAutomaton investment() { return parse_automaton(fixture("investment.aut")); }

inline Rational R(const std::string& s) { return Rational::parse(s); }

// Random arena: each vertex gets 1..max_out distinct successors (Eve at least 2).
inline WeightedArena random_arena(std::mt19937& rng, int n, int wmax, const Rational& lambda, int max_out = 3,
                                  double eve_share = 0.5) {
  WeightedArena g;
  g.lambda = DiscountFactor(lambda);
  std::uniform_real_distribution<double> coin(0, 1);
  for (int v = 0; v < n; ++v) g.add_vertex("v" + std::to_string(v), coin(rng) < eve_share ? Player::Eve : Player::Adam);
  if (n == 1) g.owner[0] = Player::Adam;
  std::uniform_int_distribution<int> W(-wmax, wmax);
  for (int v = 0; v < n; ++v) {
    int lo = g.is_eve(v) ? 2 : 1;
    int k = std::uniform_int_distribution<int>(lo, std::max(lo, std::min(max_out, n)))(rng);
    std::set<int> targets;
    while ((int)targets.size() < k) targets.insert(std::uniform_int_distribution<int>(0, n - 1)(rng));
    for (int t : targets) g.add_edge(v, t, Rational(W(rng)));
  }
  g.init = 0;
  g.finalize();
  return g;
}

inline Rational pick_lambda(std::mt19937& rng) {
  static const Rational ls[] = {Rational(1, 2), Rational(2, 3), Rational(9, 10)};
  return ls[std::uniform_int_distribution<int>(0, 2)(rng)];
}

}  // namespace testing_support

namespace testing_support {

// Random total automaton, 1..max_deg transitions per (state, symbol).
inline WeightedAutomaton random_automaton(std::mt19937& rng, int n, int k, int wmax, const Rational& lambda,
                                          int max_deg = 2) {
  WeightedAutomaton a;
  a.lambda = DiscountFactor(lambda);
  for (int q = 0; q < n; ++q) a.add_state("q" + std::to_string(q));
  for (int x = 0; x < k; ++x) a.add_symbol("a" + std::to_string(x));
  std::uniform_int_distribution<int> W(-wmax, wmax), T(0, n - 1), D(1, max_deg);
  for (int q = 0; q < n; ++q)
    for (int x = 0; x < k; ++x) {
      std::set<int> ts;
      int d = D(rng);
      while ((int)ts.size() < std::min(d, n)) ts.insert(T(rng));
      for (int t : ts) a.add_transition(q, x, t, Rational(W(rng)));
    }
  a.init = 0;
  a.finalize();
  return a;
}

// Acyclic except for a zero-weight sink (the last state): every run is in
// the sink after n-1 steps, so finite-depth search is exact.
inline WeightedAutomaton layered_automaton(std::mt19937& rng, int n, int k, int wmax, const Rational& lambda,
                                           int max_deg = 2) {
  WeightedAutomaton a;
  a.lambda = DiscountFactor(lambda);
  for (int q = 0; q < n; ++q) a.add_state("q" + std::to_string(q));
  for (int x = 0; x < k; ++x) a.add_symbol("a" + std::to_string(x));
  std::uniform_int_distribution<int> W(-wmax, wmax), D(1, max_deg);
  int sink = n - 1;
  for (int q = 0; q < n; ++q)
    for (int x = 0; x < k; ++x) {
      if (q == sink) {
        a.add_transition(q, x, q, Rational(0));
        continue;
      }
      std::set<int> ts;
      int d = std::min(D(rng), n - 1 - q);
      std::uniform_int_distribution<int> T(q + 1, n - 1);
      while ((int)ts.size() < d) ts.insert(T(rng));
      for (int t : ts) a.add_transition(q, x, t, Rational(W(rng)));
    }
  a.init = 0;
  a.finalize();
  return a;
}

}  // namespace testing_support
