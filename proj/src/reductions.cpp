#include "regret/reductions.hpp"

#include "regret/values.hpp"

#include <functional>
#include <set>
#include <sstream>

namespace regret {

namespace {

// whitespace-split lines, skipping blanks and 'c' comments
std::vector<std::pair<int, std::vector<std::string>>> dimacs_lines(const std::string& text) {
  std::vector<std::pair<int, std::vector<std::string>>> r;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty() || toks[0] == "c") continue;
    r.push_back({no, toks});
  }
  return r;
}

int to_int(const std::string& s, int line) {
  try {
    std::size_t pos;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + s + "'", line);
  }
}

}  // namespace

TwoPairGraph parse_two_pair_graph(const std::string& text) {
  TwoPairGraph g;
  bool header = false, terms = false;
  for (auto& [no, t] : dimacs_lines(text)) {
    auto vertex = [&, no = no](const std::string& s) {
      int v = to_int(s, no);
      if (v < 1 || v > g.n) throw ParseError("vertex " + s + " out of range", no);
      return v - 1;
    };
    if (t[0] == "p") {
      if (t.size() != 4 || t[1] != "edge") throw ParseError("expected 'p edge N M'", no);
      g.n = to_int(t[2], no);
      header = true;
    } else if (!header) {
      throw ParseError("missing 'p edge' header", no);
    } else if (t[0] == "e") {
      if (t.size() != 3) throw ParseError("expected 'e u v'", no);
      g.edges.push_back({vertex(t[1]), vertex(t[2])});
    } else if (t[0] == "t") {
      if (t.size() != 5) throw ParseError("expected 't s1 t1 s2 t2'", no);
      g.s1 = vertex(t[1]), g.t1 = vertex(t[2]), g.s2 = vertex(t[3]), g.t2 = vertex(t[4]);
      terms = true;
    } else {
      throw ParseError("unknown line '" + t[0] + "'", no);
    }
  }
  if (!header) throw ParseError("missing 'p edge' header");
  if (!terms) throw ParseError("missing terminal line 't s1 t1 s2 t2'");
  return g;
}

Cnf parse_dimacs_cnf(const std::string& text) {
  Cnf f;
  bool header = false;
  int declared = 0;
  std::vector<int> cur;
  for (auto& [no, t] : dimacs_lines(text)) {
    if (t[0] == "p") {
      if (t.size() != 4 || t[1] != "cnf") throw ParseError("expected 'p cnf VARS CLAUSES'", no);
      f.vars = to_int(t[2], no);
      declared = to_int(t[3], no);
      header = true;
      continue;
    }
    if (!header) throw ParseError("missing 'p cnf' header", no);
    for (auto& s : t) {
      int l = to_int(s, no);
      if (l == 0) {
        if (cur.empty()) throw ParseError("empty clause", no);
        f.clauses.push_back(cur);
        cur.clear();
      } else {
        if (std::abs(l) > f.vars) throw ParseError("literal " + s + " out of range", no);
        cur.push_back(l);
      }
    }
  }
  if (!header) throw ParseError("missing 'p cnf' header");
  if (!cur.empty()) throw ParseError("last clause not terminated by 0");
  if ((int)f.clauses.size() != declared) throw ParseError("clause count differs from header");
  return f;
}

std::string format_dimacs_cnf(const Cnf& f) {
  std::ostringstream os;
  os << "p cnf " << f.vars << " " << f.clauses.size() << "\n";
  for (auto& c : f.clauses) {
    for (int l : c) os << l << " ";
    os << "0\n";
  }
  return os.str();
}

bool brute_force_sat(const Cnf& f) {
  for (long bits = 0; bits < (1L << f.vars); ++bits) {
    bool all = true;
    for (auto& c : f.clauses) {
      bool sat = false;
      for (int l : c) sat |= (((bits >> (std::abs(l) - 1)) & 1) == 1) == (l > 0);
      if (!(all = sat)) break;
    }
    if (all) return true;
  }
  return false;
}

bool has_disjoint_paths(const TwoPairGraph& g) {
  std::vector<std::vector<int>> adj(g.n);
  for (auto [u, v] : g.edges) adj[u].push_back(v);
  std::vector<bool> on(g.n, false);
  auto second = [&]() {
    if (on[g.s2] || on[g.t2]) return false;
    std::vector<bool> seen = on;
    std::vector<int> st{g.s2};
    seen[g.s2] = true;
    while (!st.empty()) {
      int u = st.back();
      st.pop_back();
      if (u == g.t2) return true;
      for (int v : adj[u])
        if (!seen[v]) seen[v] = true, st.push_back(v);
    }
    return false;
  };
  std::function<bool(int)> first = [&](int u) {
    on[u] = true;
    bool found = u == g.t1 ? second() : false;
    if (u != g.t1)
      for (int v : adj[u])
        if (!on[v] && first(v)) {
          found = true;
          break;
        }
    on[u] = false;
    return found;
  };
  return first(g.s1);
}

GeneratedInstance aval_gadget(const WeightedArena& g) {
  WeightedArena h;
  h.lambda = g.lambda;
  for (int v = 0; v < g.size(); ++v) h.add_vertex(g.names[v], g.owner[v]);
  for (auto& e : g.edges) h.add_edge(e.src, e.dst, e.w);
  const Rational& l = g.lambda.value();
  Rational K = g.W() / (Rational(1) - l);
  auto fresh = [&](std::string n) {
    while (g.find(n) >= 0) n += "'";
    return n;
  };
  int vi = h.add_vertex(fresh("v'_I"), Player::Eve);
  int branch = h.add_vertex(fresh("gadget"), Player::Adam);
  int hi = h.add_vertex(fresh("high"), Player::Adam);
  int lo = h.add_vertex(fresh("low"), Player::Adam);
  h.add_edge(vi, g.init, 0);
  h.add_edge(vi, branch, 0);
  h.add_edge(branch, hi, K + 1);
  h.add_edge(branch, lo, -3 * K - 2);
  h.add_edge(hi, hi, 0);
  h.add_edge(lo, lo, 0);
  h.init = vi;
  h.finalize();

  GeneratedInstance r;
  Rational aval = antag_value(g)[g.init];
  r.arena = std::move(h);
  r.property = "regret_all";
  r.expected_value = l * (K + 1 - aval);
  r.checker = "identity regret = lambda (K + 1 - aVal(G)) with aVal from strategy improvement";
  r.provenance = {{"K", K.str()}, {"aval", aval.str()}, {"source_vertices", std::to_string(g.size())}};
  return r;
}

GeneratedInstance gen_2dp(const TwoPairGraph& in, const Rational& lambda, const Rational& r) {
  auto& G = in;
  auto bad = [](const std::string& m) { throw std::invalid_argument("gen_2dp: " + m); };
  auto ok = [&](int v) { return v >= 0 && v < G.n; };
  if (!ok(G.s1) || !ok(G.t1) || !ok(G.s2) || !ok(G.t2)) bad("terminal out of range");
  if (std::set<int>{G.s1, G.t1, G.s2, G.t2}.size() != 4) bad("the four terminals must be distinct");
  if (r < 0) bad("threshold must be nonnegative");
  std::set<std::pair<int, int>> E(G.edges.begin(), G.edges.end());
  std::vector<std::vector<int>> adj(G.n);
  for (auto [u, v] : E) adj[u].push_back(v);
  auto reach = [&](int s, int t) {
    std::vector<bool> seen(G.n, false);
    std::vector<int> st{s};
    seen[s] = true;
    while (!st.empty()) {
      int u = st.back();
      st.pop_back();
      for (int v : adj[u])
        if (!seen[v]) seen[v] = true, st.push_back(v);
    }
    return (bool)seen[t];
  };
  if (!reach(G.s1, G.t1)) bad("t1 is not reachable from s1");
  if (!reach(G.s2, G.t2)) bad("t2 is not reachable from s2");

  DiscountFactor l(lambda);
  Rational alpha = (r + 1) / l.pow(G.n);
  Rational A = (Rational(1) - lambda) * alpha, B = (Rational(1) - lambda) * alpha * alpha;

  WeightedArena h;
  h.lambda = l;
  for (int v = 0; v < G.n; ++v) h.add_vertex("v" + std::to_string(v + 1), Player::Adam);
  // terminals with out-edges are replaced by fresh sinks taking their in-edges
  int T1 = G.t1, T2 = G.t2;
  if (!adj[G.t1].empty()) T1 = h.add_vertex("v" + std::to_string(G.t1 + 1) + "'", Player::Adam);
  if (!adj[G.t2].empty()) T2 = h.add_vertex("v" + std::to_string(G.t2 + 1) + "'", Player::Adam);
  int gadgets = 0;
  for (auto [u, v] : E) {
    if (v == G.t1) {
      int e = h.add_vertex("e" + std::to_string(++gadgets), Player::Eve);
      int d = h.add_vertex("d" + std::to_string(gadgets), Player::Adam);
      h.add_edge(u, e, 0);
      h.add_edge(e, T1, 0);
      h.add_edge(e, d, 0);
      h.add_edge(d, d, 0);
      h.add_edge(d, G.s2, 0);
    } else {
      h.add_edge(u, v == G.t2 ? T2 : v, 0);
    }
  }
  h.add_edge(T1, T1, A);
  h.add_edge(T2, T2, B);
  for (int v = 0; v < h.size(); ++v)
    if (h.out[v].empty()) h.add_edge(v, v, 0);
  h.init = G.s1;
  h.finalize();

  GeneratedInstance res;
  bool paths = has_disjoint_paths(G);
  res.arena = std::move(h);
  res.property = "zero_regret_positional";
  res.expected_answer = !paths;
  res.checker = "exhaustive vertex-disjoint path search";
  res.provenance = {{"vertices", std::to_string(G.n)},
                    {"edges", std::to_string(E.size())},
                    {"disjoint_paths", paths ? "yes" : "no"},
                    {"A", A.str()},
                    {"B", B.str()},
                    {"r", r.str()}};
  return res;
}

GeneratedInstance gen_sat(const Cnf& f, const Rational& lambda) {
  if (f.clauses.empty() || f.vars < 1) throw std::invalid_argument("gen_sat: need at least one clause and variable");
  int n = (int)f.clauses.size(), m = f.vars;
  WeightedAutomaton a;
  a.lambda = DiscountFactor(lambda);
  int bail = a.add_symbol("bail"), hash = a.add_symbol("#");
  std::vector<int> sym(n);
  for (int i = 0; i < n; ++i) sym[i] = a.add_symbol(std::to_string(i + 1));
  int all = (int)a.alphabet.size();

  int vi = a.add_state("v_I");
  int linter = a.add_state("left");
  int rinter = a.add_state("right");
  int bot0 = a.add_state("bot_0");
  int botZ = a.add_state("bot_Z");
  int bot1 = a.add_state("bot_1");
  int l0 = a.add_state("clause");
  std::vector<int> lA(n), lD(n);
  for (int i = 0; i < n; ++i) {
    lA[i] = a.add_state("clause_" + std::to_string(i + 1));
    lD[i] = a.add_state("clause_" + std::to_string(i + 1) + "#");
  }
  int q0 = a.add_state("value");
  std::vector<int> x(m), xt(m), xf(m);
  for (int j = 0; j < m; ++j) {
    x[j] = a.add_state("x" + std::to_string(j + 1));
    xt[j] = a.add_state(std::to_string(j + 1) + "_true");
    xf[j] = a.add_state(std::to_string(j + 1) + "_false");
  }
  a.init = vi;

  for (int s = 0; s < all; ++s) {
    a.add_transition(vi, s, linter, 0);
    a.add_transition(vi, s, rinter, 0);
    a.add_transition(linter, s, s == bail ? bot0 : l0, 0);
    a.add_transition(rinter, s, s == bail ? botZ : q0, 0);
    a.add_transition(bot0, s, bot0, 0);
    a.add_transition(botZ, s, botZ, sat_bail_weight);
    a.add_transition(bot1, s, bot1, 1);
  }
  // clause chooser: i # i reaches bot_1
  for (int i = 0; i < n; ++i) {
    a.add_transition(l0, sym[i], lA[i], 1);
    a.add_transition(lA[i], hash, lD[i], 1);
    a.add_transition(lD[i], sym[i], bot1, 1);
  }
  // value chooser
  for (int i = 0; i < n; ++i) {
    std::set<int> vars;
    for (int lit : f.clauses[i]) vars.insert(std::abs(lit) - 1);
    for (int j : vars) a.add_transition(q0, sym[i], x[j], 1);
  }
  for (int j = 0; j < m; ++j) {
    a.add_transition(x[j], hash, xt[j], 1);
    a.add_transition(x[j], hash, xf[j], 1);
  }
  for (int i = 0; i < n; ++i) {
    std::set<int> pos, neg;
    for (int lit : f.clauses[i]) (lit > 0 ? pos : neg).insert(std::abs(lit) - 1);
    for (int j : pos) a.add_transition(xt[j], sym[i], bot1, 1);
    for (int j : neg) a.add_transition(xf[j], sym[i], bot1, 1);
  }
  // everything missing falls into bot_0
  std::vector<std::vector<bool>> has(a.size(), std::vector<bool>(all, false));
  for (auto& t : a.trans) has[t.src][t.sym] = true;
  for (int q = 0; q < a.size(); ++q)
    for (int s = 0; s < all; ++s)
      if (!has[q][s]) a.add_transition(q, s, bot0, 0);
  a.finalize();

  GeneratedInstance res;
  bool sat = brute_force_sat(f);
  res.automaton = std::move(a);
  res.property = "zero_regret_word";
  res.expected_answer = sat;
  res.checker = "brute-force SAT over all assignments";
  res.provenance = {{"variables", std::to_string(m)},
                    {"clauses", std::to_string(n)},
                    {"satisfiable", sat ? "yes" : "no"},
                    {"Z", sat_bail_weight.str()},
                    {"cnf", format_dimacs_cnf(f)}};
  return res;
}

}  // namespace regret
