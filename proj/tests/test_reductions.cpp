#include <doctest.h>

#include "helpers.hpp"
#include "regret/reductions.hpp"
#include "regret/regret_all.hpp"
#include "regret/regret_positional.hpp"
#include "regret/regret_word.hpp"

#include <algorithm>
#include <numeric>
#include <set>

using namespace regret;
using namespace testing_support;

TEST_CASE("aval gadget on bigmem") {
  auto g = bigmem();
  auto gi = aval_gadget(g);
  REQUIRE(gi.arena);
  CHECK(*gi.expected_value == R("8919/10"));
  CHECK(gi.arena->size() == g.size() + 4);
  CHECK(regret_all(*gi.arena).value == R("8919/10"));
}

TEST_CASE("aval gadget structure") {
  auto g = bigmem();
  auto h = *aval_gadget(g).arena;
  // K = 100 / (1/10)
  std::multiset<Rational> ws;
  for (auto& e : h.edges)
    if (e.src >= g.size()) ws.insert(e.w);
  CHECK(ws == std::multiset<Rational>{0, 0, 0, 0, 1001, -3002});
  CHECK(h.is_eve(h.init));
  CHECK(h.init >= g.size());
}

TEST_CASE("aval gadget on a zero self-loop") {
  WeightedArena g;
  g.lambda = DiscountFactor(R("2/3"));
  g.add_vertex("v", Player::Adam);
  g.add_edge(0, 0, 0);
  g.init = 0;
  g.finalize();
  auto gi = aval_gadget(g);
  CHECK(*gi.expected_value == R("2/3"));
  CHECK(regret_all(*gi.arena).value == R("2/3"));
}

TEST_CASE("aval gadget identity on random arenas") {
  std::mt19937 rng(17);
  for (int rep = 0; rep < 25; ++rep) {
    auto g = random_arena(rng, 2 + rep % 3, 4, pick_lambda(rng));
    auto gi = aval_gadget(g);
    CAPTURE(rep);
    CHECK(regret_all(*gi.arena).value == *gi.expected_value);
  }
}

static TwoPairGraph graph(int n, std::vector<std::pair<int, int>> es, int s1, int t1, int s2, int t2) {
  TwoPairGraph g;
  g.n = n;
  g.edges = std::move(es);
  g.s1 = s1, g.t1 = t1, g.s2 = s2, g.t2 = t2;
  return g;
}

TEST_CASE("disjoint path checker") {
  // two parallel chains
  CHECK(has_disjoint_paths(graph(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}}, 0, 2, 3, 5)));
  // both pairs must pass through vertex 2
  CHECK_FALSE(has_disjoint_paths(graph(5, {{0, 2}, {2, 1}, {3, 2}, {2, 4}}, 0, 1, 3, 4)));
  // a detour around the shared vertex
  CHECK(has_disjoint_paths(graph(6, {{0, 2}, {2, 1}, {3, 2}, {2, 4}, {0, 5}, {5, 1}}, 0, 1, 3, 4)));
  // the only s1 path runs through s2
  CHECK_FALSE(has_disjoint_paths(graph(4, {{0, 2}, {2, 1}, {2, 3}}, 0, 1, 2, 3)));
}

TEST_CASE("2dp: parallel chains give regret above r") {
  auto g = graph(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}}, 0, 2, 3, 5);
  Rational r = 1;
  auto gi = gen_2dp(g, R("1/2"), r);
  CHECK_FALSE(*gi.expected_answer);
  CHECK_FALSE(zero_regret_positional(*gi.arena).answer);
  CHECK(regret_positional(*gi.arena).value > r);
}

TEST_CASE("2dp: a shared cut vertex gives regret 0") {
  auto g = graph(5, {{0, 2}, {2, 1}, {3, 2}, {2, 4}}, 0, 1, 3, 4);
  auto gi = gen_2dp(g, R("1/2"), 1);
  CHECK(*gi.expected_answer);
  CHECK(zero_regret_positional(*gi.arena).answer);
  CHECK(regret_positional(*gi.arena).value == 0);
}

TEST_CASE("2dp structure") {
  auto g = graph(5, {{0, 2}, {2, 1}, {3, 2}, {2, 4}, {0, 1}}, 0, 1, 3, 4);
  Rational lam = R("1/2"), r = 2;
  auto h = *gen_2dp(g, lam, r).arena;
  Rational alpha = (r + 1) / lam.pow(5);
  int eve = 0;
  for (auto& e : h.edges) {
    bool loop = e.src == e.dst;
    if (!loop) CHECK(e.w == 0);
    if (loop && e.src == 1) CHECK(e.w == (1 - lam) * alpha);
    if (loop && e.src == 4) CHECK(e.w == (1 - lam) * alpha * alpha);
  }
  for (int v = 0; v < h.size(); ++v)
    if (h.is_eve(v)) {
      ++eve;
      CHECK(h.out[v].size() == 2);
    }
  CHECK(eve == 2);  // one gadget per edge into t1
  for (int v = 0; v < 5; ++v) CHECK_FALSE(h.is_eve(v));
  CHECK(h.init == 0);
}

TEST_CASE("2dp preconditions and fresh sinks") {
  CHECK_THROWS(gen_2dp(graph(4, {{0, 1}}, 0, 1, 2, 3), R("1/2"), 1));          // t2 unreachable
  CHECK_THROWS(gen_2dp(graph(4, {{0, 1}, {2, 1}}, 0, 1, 2, 1), R("1/2"), 1));  // shared terminal
  // t1 has an out-edge: a fresh sink takes over
  auto gi = gen_2dp(graph(4, {{0, 1}, {1, 0}, {2, 3}}, 0, 1, 2, 3), R("1/2"), 1);
  auto& h = *gi.arena;
  int fresh = h.find("v2'");
  REQUIRE(fresh >= 0);
  CHECK(h.out[fresh].size() == 1);
  CHECK(h.edges[h.out[fresh][0]].dst == fresh);
  CHECK_FALSE(*gi.expected_answer);
  CHECK_FALSE(zero_regret_positional(h).answer);
}

TEST_CASE("2dp expectations hold on random graphs") {
  std::mt19937 rng(2);
  int n_paths = 0, done = 0;
  while (done < 25) {
    TwoPairGraph g;
    g.n = std::uniform_int_distribution<int>(4, 6)(rng);
    std::bernoulli_distribution p(0.3);
    for (int u = 0; u < g.n; ++u)
      for (int v = 0; v < g.n; ++v)
        if (u != v && p(rng)) g.edges.push_back({u, v});
    std::vector<int> perm(g.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    g.s1 = perm[0], g.t1 = perm[1], g.s2 = perm[2], g.t2 = perm[3];
    GeneratedInstance gi;
    try {
      gi = gen_2dp(g, R("1/2"), 1);
    } catch (const std::invalid_argument&) {
      continue;
    }
    ++done;
    n_paths += !*gi.expected_answer;
    CHECK(zero_regret_positional(*gi.arena).answer == *gi.expected_answer);
  }
  CHECK(n_paths > 3);
  CHECK(n_paths < 22);
}

TEST_CASE("dimacs cnf") {
  auto f = parse_dimacs_cnf("c example\np cnf 3 2\n1 -3 0\n2 3 -1 0\n");
  CHECK(f.vars == 3);
  CHECK(f.clauses == std::vector<std::vector<int>>{{1, -3}, {2, 3, -1}});
  CHECK(parse_dimacs_cnf(format_dimacs_cnf(f)).clauses == f.clauses);
  CHECK_THROWS_AS(parse_dimacs_cnf("p cnf 1 1\n2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs_cnf("p cnf 1 2\n1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs_cnf("p cnf 1 1\n1\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs_cnf("1 0\n"), ParseError);
}

TEST_CASE("dimacs graph") {
  auto g = parse_two_pair_graph("p edge 4 2\ne 1 2\ne 3 4\nt 1 2 3 4\n");
  CHECK(g.n == 4);
  CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
  CHECK(g.s1 == 0);
  CHECK(g.t2 == 3);
  CHECK_THROWS_AS(parse_two_pair_graph("p edge 2 1\ne 1 3\nt 1 2 1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_two_pair_graph("p edge 2 1\ne 1 2\n"), ParseError);
}

TEST_CASE("brute force sat") {
  CHECK(brute_force_sat(parse_dimacs_cnf("p cnf 1 1\n1 0\n")));
  CHECK_FALSE(brute_force_sat(parse_dimacs_cnf("p cnf 1 2\n1 0\n-1 0\n")));
  CHECK_FALSE(brute_force_sat(parse_dimacs_cnf("p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0\n")));
  CHECK(brute_force_sat(parse_dimacs_cnf("p cnf 2 3\n1 2 0\n-1 2 0\n-1 -2 0\n")));
}

TEST_CASE("sat: single clause and contradiction") {
  auto yes = gen_sat(parse_dimacs_cnf("p cnf 1 1\n1 0\n"));
  CHECK(*yes.expected_answer);
  auto z = zero_regret_word(*yes.automaton);
  CHECK(z.answer);
  CHECK(strategy_regret_word(*yes.automaton, *z.witness) == 0);
  auto no = gen_sat(parse_dimacs_cnf("p cnf 1 2\n1 0\n-1 0\n"));
  CHECK_FALSE(*no.expected_answer);
  CHECK_FALSE(zero_regret_word(*no.automaton).answer);
}

TEST_CASE("sat structure") {
  Cnf f = parse_dimacs_cnf("p cnf 2 3\n1 2 0\n-1 2 0\n-1 -2 0\n");
  auto a = *gen_sat(f).automaton;
  CHECK(a.alphabet == std::vector<std::string>{"bail", "#", "1", "2", "3"});
  for (int q = 0; q < a.size(); ++q)
    for (int x = 0; x < 5; ++x) CHECK_FALSE(a.out[q][x].empty());
  int botZ = a.find_state("bot_Z");
  for (auto& t : a.trans)
    if (t.src != botZ) CHECK((t.w == 0 || t.w == 1));
  // the value chooser of the three-clause formula
  auto targets = [&](const char* q, const char* x) {
    std::set<std::string> r;
    for (int t : a.out[a.find_state(q)][a.find_symbol(x)]) r.insert(a.states[a.trans[t].dst]);
    return r;
  };
  for (const char* i : {"1", "2", "3"}) CHECK(targets("value", i) == std::set<std::string>{"x1", "x2"});
  CHECK(targets("x1", "#") == std::set<std::string>{"1_true", "1_false"});
  CHECK(targets("1_true", "1") == std::set<std::string>{"bot_1"});
  CHECK(targets("1_true", "2") == std::set<std::string>{"bot_0"});
  CHECK(targets("1_false", "2") == std::set<std::string>{"bot_1"});
  CHECK(targets("1_false", "3") == std::set<std::string>{"bot_1"});
  CHECK(targets("2_true", "1") == std::set<std::string>{"bot_1"});
  CHECK(targets("2_true", "2") == std::set<std::string>{"bot_1"});
  CHECK(targets("2_false", "3") == std::set<std::string>{"bot_1"});
  CHECK(targets("2_false", "1") == std::set<std::string>{"bot_0"});
}

// Satisfiable, yet Adam can spell "i # i'" with i' != i: some value-chooser run
// for clause i satisfies clause i' while Eve's chosen literal does not.
TEST_CASE("sat: three-clause formula keeps regret on mismatched clause words") {
  Cnf f = parse_dimacs_cnf("p cnf 2 3\n1 2 0\n-1 2 0\n-1 -2 0\n");
  auto gi = gen_sat(f);
  CHECK(*gi.expected_answer);
  auto& a = *gi.automaton;
  CHECK_FALSE(zero_regret_word(a).answer);
  // over all Eve strategies, lambda^4 + lambda^5 / (1 - lambda)
  auto iv = oracle_interval_word(a, 6);
  CHECK(iv.low == R("1/8"));
  CHECK(iv.high == R("1/8"));
}
