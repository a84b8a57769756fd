#include "regret/core.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace regret {

ParseError::ParseError(const std::string& msg, int l, int c)
    : std::runtime_error(l > 0 ? "line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg
                               : msg),
      line(l), column(c) {}

DiscountFactor::DiscountFactor(const Rational& l) : lambda_(l) {
  if (l.sign() <= 0 || l >= Rational(1)) throw ParseError("lambda must lie in (0,1), got " + l.str());
}

const Rational& DiscountFactor::pow(int k) const {
  if (powers_.empty()) powers_.push_back(Rational(1));
  while ((int)powers_.size() <= k) powers_.push_back(powers_.back() * lambda_);
  return powers_[k];
}

int WeightedArena::add_vertex(const std::string& name, Player p) {
  names.push_back(name);
  owner.push_back(p);
  out.emplace_back();
  return size() - 1;
}

int WeightedArena::add_edge(int u, int v, const Rational& w) {
  edges.push_back({u, v, w});
  out[u].push_back((int)edges.size() - 1);
  return (int)edges.size() - 1;
}

int WeightedArena::find(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : int(it - names.begin());
}

int WeightedArena::edge_index(int u, int v) const {
  for (int e : out[u])
    if (edges[e].dst == v) return e;
  return -1;
}

void WeightedArena::finalize() {
  if (init < 0 || init >= size()) throw ParseError("missing initial vertex");
  W_ = Rational(0);
  for (auto& e : edges) W_ = max(W_, e.w.abs());
  for (int u = 0; u < size(); ++u) {
    auto& o = out[u];
    std::sort(o.begin(), o.end(), [&](int a, int b) { return edges[a].dst < edges[b].dst; });
    for (std::size_t i = 1; i < o.size(); ++i)
      if (edges[o[i]].dst == edges[o[i - 1]].dst)
        throw ParseError("duplicate edge " + names[u] + " -> " + names[edges[o[i]].dst]);
    if (o.empty()) throw ParseError("sink vertex " + names[u]);
    if (owner[u] == Player::Eve && o.size() < 2) throw ParseError("Eve out-degree < 2 at " + names[u]);
  }
}

int WeightedAutomaton::add_state(const std::string& name) {
  states.push_back(name);
  return size() - 1;
}

int WeightedAutomaton::add_symbol(const std::string& name) {
  alphabet.push_back(name);
  return (int)alphabet.size() - 1;
}

int WeightedAutomaton::add_transition(int p, int a, int q, const Rational& w) {
  trans.push_back({p, a, q, w});
  return (int)trans.size() - 1;
}

int WeightedAutomaton::find_state(const std::string& n) const {
  auto it = std::find(states.begin(), states.end(), n);
  return it == states.end() ? -1 : int(it - states.begin());
}

int WeightedAutomaton::find_symbol(const std::string& n) const {
  auto it = std::find(alphabet.begin(), alphabet.end(), n);
  return it == alphabet.end() ? -1 : int(it - alphabet.begin());
}

void WeightedAutomaton::finalize() {
  if (init < 0 || init >= size()) throw ParseError("missing initial state");
  if (alphabet.empty()) throw ParseError("empty alphabet");
  out.assign(size(), std::vector<std::vector<int>>(alphabet.size()));
  W_ = Rational(0);
  for (int t = 0; t < (int)trans.size(); ++t) {
    out[trans[t].src][trans[t].sym].push_back(t);
    W_ = max(W_, trans[t].w.abs());
  }
  for (int q = 0; q < size(); ++q)
    for (int a = 0; a < (int)alphabet.size(); ++a)
      if (out[q][a].empty())
        throw ParseError("non-total: no transition for (" + states[q] + ", " + alphabet[a] + ")");
}

PlayPrefix::PlayPrefix(const WeightedArena& g, int start) : g_(&g), vs_{start}, d_{Rational(0)} {}

void PlayPrefix::push(int v) {
  int e = g_->edge_index(vs_.back(), v);
  if (e < 0) throw std::invalid_argument("no edge " + g_->names[vs_.back()] + " -> " + g_->names[v]);
  int k = size() - 1;
  d_.push_back(d_.back() + g_->lambda.pow(k) * g_->edges[e].w);
  vs_.push_back(v);
}

std::vector<Rational> PlayPrefix::weights() const {
  std::vector<Rational> ws;
  for (int i = 0; i + 1 < size(); ++i) ws.push_back(g_->edges[g_->edge_index(vs_[i], vs_[i + 1])].w);
  return ws;
}

Rational discounted_sum(const std::vector<Rational>& xs, const DiscountFactor& l) {
  Rational s(0), p(1);
  for (auto& x : xs) {
    s += p * x;
    p *= l.value();
  }
  return s;
}

Rational loop_value(const Rational& w, const DiscountFactor& l) { return w / (Rational(1) - l.value()); }

namespace {

struct Token {
  std::string text;
  int col;
};

// Splits into whitespace-separated tokens.  Lines whose first token starts
// with '#' are comments; trailing comments are only honoured when allowed
// because '#' is a legal automaton symbol.
std::vector<std::vector<Token>> tokenize(const std::string& text, bool trailing_comments,
                                         std::vector<int>& line_no) {
  std::vector<std::vector<Token>> lines;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && isspace((unsigned char)line[i])) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !isspace((unsigned char)line[j])) ++j;
      std::string t = line.substr(i, j - i);
      if (t[0] == '#' && (toks.empty() || trailing_comments)) break;
      toks.push_back({t, (int)i + 1});
      i = j;
    }
    if (!toks.empty()) {
      lines.push_back(std::move(toks));
      line_no.push_back(n);
    }
  }
  return lines;
}

Rational parse_rat(const Token& t, int line) {
  Rational r;
  if (!Rational::try_parse(t.text, r)) throw ParseError("expected a rational, got '" + t.text + "'", line, t.col);
  return r;
}

void expect_args(const std::vector<Token>& l, std::size_t n, int line, bool at_least = false) {
  if (at_least ? l.size() < n + 1 : l.size() != n + 1)
    throw ParseError("wrong number of arguments to '" + l[0].text + "'", line, l[0].col);
}

}  // namespace

WeightedArena parse_arena(const std::string& text) {
  std::vector<int> ln;
  auto lines = tokenize(text, true, ln);
  WeightedArena g;
  bool have_lambda = false;
  std::string init_name;
  int init_line = 0, init_col = 0;
  std::vector<std::tuple<Token, Token, Rational, int>> pending;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    auto& l = lines[k];
    int line = ln[k];
    const std::string& kw = l[0].text;
    if (kw == "lambda") {
      expect_args(l, 1, line);
      Rational r = parse_rat(l[1], line);
      if (r.sign() <= 0 || r >= Rational(1)) throw ParseError("lambda must lie in (0,1)", line, l[1].col);
      g.lambda = DiscountFactor(r);
      have_lambda = true;
    } else if (kw == "eve" || kw == "adam") {
      expect_args(l, 1, line, true);
      for (std::size_t i = 1; i < l.size(); ++i) {
        if (g.find(l[i].text) >= 0) throw ParseError("vertex declared twice: " + l[i].text, line, l[i].col);
        g.add_vertex(l[i].text, kw == "eve" ? Player::Eve : Player::Adam);
      }
    } else if (kw == "init") {
      expect_args(l, 1, line);
      init_name = l[1].text;
      init_line = line;
      init_col = l[1].col;
    } else if (kw == "edge") {
      expect_args(l, 3, line);
      pending.emplace_back(l[1], l[2], parse_rat(l[3], line), line);
    } else {
      throw ParseError("unknown keyword '" + kw + "'", line, l[0].col);
    }
  }
  if (!have_lambda) throw ParseError("missing lambda");
  std::set<std::pair<int, int>> seen;
  for (auto& [a, b, w, line] : pending) {
    int u = g.find(a.text), v = g.find(b.text);
    if (u < 0) throw ParseError("unknown vertex '" + a.text + "'", line, a.col);
    if (v < 0) throw ParseError("unknown vertex '" + b.text + "'", line, b.col);
    if (!seen.insert({u, v}).second) throw ParseError("duplicate edge " + a.text + " -> " + b.text, line, a.col);
    g.add_edge(u, v, w);
  }
  if (init_name.empty()) throw ParseError("missing initial vertex");
  g.init = g.find(init_name);
  if (g.init < 0) throw ParseError("unknown vertex '" + init_name + "'", init_line, init_col);
  g.finalize();
  return g;
}

WeightedAutomaton parse_automaton(const std::string& text) {
  std::vector<int> ln;
  auto lines = tokenize(text, false, ln);
  WeightedAutomaton a;
  bool have_lambda = false;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    auto& l = lines[k];
    int line = ln[k];
    const std::string& kw = l[0].text;
    if (kw == "lambda") {
      expect_args(l, 1, line);
      Rational r = parse_rat(l[1], line);
      if (r.sign() <= 0 || r >= Rational(1)) throw ParseError("lambda must lie in (0,1)", line, l[1].col);
      a.lambda = DiscountFactor(r);
      have_lambda = true;
    } else if (kw == "alphabet") {
      expect_args(l, 1, line, true);
      for (std::size_t i = 1; i < l.size(); ++i) {
        if (a.find_symbol(l[i].text) >= 0) throw ParseError("symbol declared twice", line, l[i].col);
        a.add_symbol(l[i].text);
      }
    } else if (kw == "state") {
      if (l.size() < 2 || l.size() > 3 || (l.size() == 3 && l[2].text != "initial"))
        throw ParseError("expected 'state NAME [initial]'", line, l[0].col);
      if (a.find_state(l[1].text) >= 0) throw ParseError("state declared twice", line, l[1].col);
      int q = a.add_state(l[1].text);
      if (l.size() == 3) {
        if (a.init >= 0) throw ParseError("two initial states", line, l[2].col);
        a.init = q;
      }
    } else if (kw == "trans") {
      expect_args(l, 4, line);
      int p = a.find_state(l[1].text), s = a.find_symbol(l[2].text), q = a.find_state(l[3].text);
      if (p < 0) throw ParseError("unknown state '" + l[1].text + "'", line, l[1].col);
      if (s < 0) throw ParseError("unknown symbol '" + l[2].text + "'", line, l[2].col);
      if (q < 0) throw ParseError("unknown state '" + l[3].text + "'", line, l[3].col);
      for (auto& t : a.trans)
        if (t.src == p && t.sym == s && t.dst == q) throw ParseError("duplicate transition", line, l[0].col);
      a.add_transition(p, s, q, parse_rat(l[4], line));
    } else {
      throw ParseError("unknown keyword '" + kw + "'", line, l[0].col);
    }
  }
  if (!have_lambda) throw ParseError("missing lambda");
  a.finalize();
  return a;
}

std::string format_arena(const WeightedArena& g) {
  std::ostringstream os;
  os << "lambda " << g.lambda.value() << "\n";
  // one declaration line per vertex keeps declaration order intact
  for (int v = 0; v < g.size(); ++v) os << (g.is_eve(v) ? "eve " : "adam ") << g.names[v] << "\n";
  os << "init " << g.names[g.init] << "\n";
  for (auto& e : g.edges) os << "edge " << g.names[e.src] << " " << g.names[e.dst] << " " << e.w << "\n";
  return os.str();
}

std::string format_automaton(const WeightedAutomaton& a) {
  std::ostringstream os;
  os << "lambda " << a.lambda.value() << "\nalphabet";
  for (auto& s : a.alphabet) os << " " << s;
  os << "\n";
  for (int q = 0; q < a.size(); ++q) os << "state " << a.states[q] << (q == a.init ? " initial" : "") << "\n";
  for (auto& t : a.trans)
    os << "trans " << a.states[t.src] << " " << a.alphabet[t.sym] << " " << a.states[t.dst] << " " << t.w << "\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace regret
