#pragma once

#include "regret/core.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace regret {

struct GeneratedInstance {
  std::optional<WeightedArena> arena;
  std::optional<WeightedAutomaton> automaton;
  // which solver the expectation is about: "regret_all", "zero_regret_positional" or "zero_regret_word"
  std::string property;
  std::optional<Rational> expected_value;
  std::optional<bool> expected_answer;
  std::string checker;  // the independent procedure behind the expectation
  std::map<std::string, std::string> provenance;
};

// Directed graph with two terminal pairs, vertices 0..n-1.
struct TwoPairGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  int s1 = -1, t1 = -1, s2 = -1, t2 = -1;
};

// DIMACS-style: "p edge N M", "e u v" (1-based, directed), "t s1 t1 s2 t2".
TwoPairGraph parse_two_pair_graph(const std::string& text);

// Conjunctive normal form; literals are +-(variable index, 1-based).
struct Cnf {
  int vars = 0;
  std::vector<std::vector<int>> clauses;
};

// DIMACS cnf: "p cnf VARS CLAUSES", clauses terminated by 0.
Cnf parse_dimacs_cnf(const std::string& text);
std::string format_dimacs_cnf(const Cnf& f);

// Exhaustive over assignments.
bool brute_force_sat(const Cnf& f);
// Exhaustive over simple s1-t1 paths, then a search for s2-t2 avoiding it.
bool has_disjoint_paths(const TwoPairGraph& g);

// G plus an initial gadget whose regret encodes aVal(G).
GeneratedInstance aval_gadget(const WeightedArena& g);

GeneratedInstance gen_2dp(const TwoPairGraph& graph, const Rational& lambda, const Rational& r);

inline const Rational sat_bail_weight = Rational(1);  // Z, the loop weight of the bail sink
GeneratedInstance gen_sat(const Cnf& f, const Rational& lambda = Rational(1, 2));

}  // namespace regret
