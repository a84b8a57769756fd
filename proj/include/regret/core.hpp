#pragma once

#include "regret/rational.hpp"

#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

namespace regret {

enum class Player { Eve, Adam };

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line = 0, int column = 0);
  int line, column;
};

class DiscountFactor {
 public:
  DiscountFactor() : lambda_(1, 2) {}
  explicit DiscountFactor(const Rational& l);
  const Rational& value() const { return lambda_; }
  mpz_class alpha() const { return lambda_.num(); }
  mpz_class beta() const { return lambda_.den(); }
  // lambda^k, cached for small k
  const Rational& pow(int k) const;

 private:
  Rational lambda_;
  mutable std::deque<Rational> powers_;  // deque keeps references stable
};

struct Edge {
  int src, dst;
  Rational w;
};

// Two-player arena.  Built through add_* then finalize(), which checks the
// invariants and sorts each out-list by target index (the tie-break order).
class WeightedArena {
 public:
  DiscountFactor lambda;
  std::vector<std::string> names;
  std::vector<Player> owner;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> out;  // edge indices, sorted by target
  int init = -1;

  int add_vertex(const std::string& name, Player p);
  int add_edge(int u, int v, const Rational& w);
  void finalize();  // throws ParseError on invariant violations

  int size() const { return (int)names.size(); }
  int find(const std::string& name) const;
  int edge_index(int u, int v) const;
  const Rational& W() const { return W_; }
  bool is_eve(int v) const { return owner[v] == Player::Eve; }

 private:
  Rational W_;
};

struct Transition {
  int src, sym, dst;
  Rational w;
};

class WeightedAutomaton {
 public:
  DiscountFactor lambda;
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  std::vector<Transition> trans;
  std::vector<std::vector<std::vector<int>>> out;  // [state][symbol] -> transition indices
  int init = -1;

  int add_state(const std::string& name);
  int add_symbol(const std::string& name);
  int add_transition(int p, int a, int q, const Rational& w);
  void finalize();  // totality and bookkeeping

  int size() const { return (int)states.size(); }
  int find_state(const std::string& n) const;
  int find_symbol(const std::string& n) const;
  const Rational& W() const { return W_; }

 private:
  Rational W_;
};

class PlayPrefix {
 public:
  PlayPrefix(const WeightedArena& g, int start);
  void push(int v);  // throws if (back, v) is not an edge
  int size() const { return (int)vs_.size(); }
  int operator[](int i) const { return vs_[i]; }
  int back() const { return vs_.back(); }
  const std::vector<int>& vertices() const { return vs_; }
  // D(k) = sum_{t<k} lambda^t w(v_t, v_{t+1})
  const Rational& D(int k) const { return d_[k]; }
  std::vector<Rational> weights() const;
  const WeightedArena& arena() const { return *g_; }

 private:
  const WeightedArena* g_;
  std::vector<int> vs_;
  std::vector<Rational> d_;
};

WeightedArena parse_arena(const std::string& text);
WeightedAutomaton parse_automaton(const std::string& text);
std::string format_arena(const WeightedArena& g);
std::string format_automaton(const WeightedAutomaton& a);
std::string read_file(const std::string& path);

Rational discounted_sum(const std::vector<Rational>& xs, const DiscountFactor& l);
Rational loop_value(const Rational& w, const DiscountFactor& l);

}  // namespace regret
