#include "regret/regret_word.hpp"

#include <functional>
#include <map>
#include <string>
#include <unordered_map>

namespace regret {

ResolutionStrategy default_resolution(const WeightedAutomaton& a) {
  ResolutionStrategy s;
  s.choice.assign(a.size(), std::vector<int>(a.alphabet.size()));
  for (int q = 0; q < a.size(); ++q)
    for (int x = 0; x < (int)a.alphabet.size(); ++x) s.choice[q][x] = a.out[q][x].front();
  return s;
}

static GameGraph automaton_graph(const WeightedAutomaton& a) {
  GameGraph h;
  h.lambda = a.lambda.value();
  for (int q = 0; q < a.size(); ++q) h.add_vertex(Player::Eve);
  for (auto& t : a.trans) h.succ[t.src].push_back({t.dst, t.w});
  return h;
}

Rational product_value(const WeightedAutomaton& a, const ResolutionStrategy& s) {
  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> todo;
  GameGraph h;
  h.lambda = a.lambda.value();
  auto get = [&](int p, int p2) {
    auto [it, fresh] = id.try_emplace({p, p2}, h.size());
    if (fresh) {
      h.add_vertex(Player::Eve);
      todo.push_back({p, p2});
    }
    return it->second;
  };
  get(a.init, a.init);
  for (std::size_t i = 0; i < todo.size(); ++i) {
    auto [p, p2] = todo[i];
    int u = (int)i;
    for (int x = 0; x < (int)a.alphabet.size(); ++x) {
      auto& mine = a.trans[s(p2, x)];
      for (int t : a.out[p][x]) {
        auto& tr = a.trans[t];
        int v = get(tr.dst, mine.dst);
        h.succ[u].push_back({v, tr.w - mine.w});
      }
    }
  }
  return one_player_values(h, Objective::Max)[0];
}

Rational strategy_regret_word(const WeightedAutomaton& a, const ResolutionStrategy& s) {
  return max(Rational(0), product_value(a, s));
}

SubsetMap subset_start(const WeightedAutomaton& a) {
  SubsetMap f(a.size());
  f[a.init] = Rational(0);
  return f;
}

SubsetMap subset_step(const WeightedAutomaton& a, const SubsetMap& f, int symbol, int step) {
  SubsetMap g(a.size());
  const Rational& lp = a.lambda.pow(step);
  for (int q = 0; q < a.size(); ++q) {
    if (!f[q]) continue;
    for (int t : a.out[q][symbol]) {
      auto& tr = a.trans[t];
      Rational v = *f[q] + lp * tr.w;
      if (!g[tr.dst] || v > *g[tr.dst]) g[tr.dst] = v;
    }
  }
  return g;
}

static SubsetMap shifted(SubsetMap f, const Rational& d) {
  for (auto& x : f)
    if (x) *x -= d;
  return f;
}

static std::string key_of(int q, int d, const SubsetMap& g) {
  std::string k = std::to_string(q) + ":" + std::to_string(d);
  for (auto& x : g) {
    k += '|';
    if (x) k += x->str();
  }
  return k;
}

namespace {

// Words up to `depth` with the partial resolution, checking a lower bound
// on the regret of every completion.  State is (Eve's state, f - c).
struct BoundCheck {
  const WeightedAutomaton& a;
  const std::vector<std::vector<int>>& sigma;
  const std::vector<Rational>& U;
  const std::vector<Rational>& L;
  int depth;
  std::uint64_t& nodes;
  std::uint64_t budget;
  std::unordered_map<std::string, bool> seen;

  // true if some completion could still have regret 0
  bool ok(int q, const SubsetMap& g, int d) {
    auto k = key_of(q, d, g);
    if (seen.count(k)) return true;  // already explored or in progress
    seen[k] = true;
    if (++nodes > budget) throw BudgetExceeded(nodes, d);
    const Rational& lp = a.lambda.pow(d);
    std::optional<Rational> best;
    for (int s = 0; s < a.size(); ++s)
      if (g[s]) {
        Rational v = *g[s] + lp * L[s];
        if (!best || v > *best) best = v;
      }
    if (*best - lp * U[q] > 0) return false;
    if (d == depth) return true;
    for (int x = 0; x < (int)a.alphabet.size(); ++x) {
      int t = sigma[q][x];
      if (t < 0) continue;
      auto& tr = a.trans[t];
      if (!ok(tr.dst, shifted(subset_step(a, g, x, d), lp * tr.w), d + 1)) return false;
    }
    return true;
  }
};

}  // namespace

ZeroRegretWord zero_regret_word(const WeightedAutomaton& a, const SearchOptions& opt) {
  int n = a.size(), m = (int)a.alphabet.size();
  auto h = automaton_graph(a);
  auto U = one_player_values(h, Objective::Max);
  auto L = one_player_values(h, Objective::Min);
  std::vector<std::vector<int>> sigma(n, std::vector<int>(m, -1));
  ZeroRegretWord res{false, std::nullopt, 0};
  int depth = std::min(n + 2, 8);

  // smallest unassigned (state, symbol) pair reachable under sigma, or none
  auto next_pair = [&]() -> std::pair<int, int> {
    std::vector<bool> reach(n, false);
    std::vector<int> st{a.init};
    reach[a.init] = true;
    std::pair<int, int> best{-1, -1};
    while (!st.empty()) {
      int q = st.back();
      st.pop_back();
      for (int x = 0; x < m; ++x) {
        int t = sigma[q][x];
        if (t < 0) {
          if (best.first < 0 || std::pair{q, x} < best) best = {q, x};
          continue;
        }
        int v = a.trans[t].dst;
        if (!reach[v]) {
          reach[v] = true;
          st.push_back(v);
        }
      }
    }
    return best;
  };

  std::function<bool()> search = [&]() -> bool {
    BoundCheck bc{a, sigma, U, L, depth, res.nodes, opt.budget, {}};
    if (!bc.ok(a.init, subset_start(a), 0)) return false;
    auto [q, x] = next_pair();
    if (q < 0) {
      ResolutionStrategy s = default_resolution(a);
      for (int p = 0; p < n; ++p)
        for (int y = 0; y < m; ++y)
          if (sigma[p][y] >= 0) s.choice[p][y] = sigma[p][y];
      if (++res.nodes > opt.budget) throw BudgetExceeded(res.nodes, 0);
      if (strategy_regret_word(a, s).is_zero()) {
        res.witness = s;
        return true;
      }
      return false;
    }
    for (int t : a.out[q][x]) {
      sigma[q][x] = t;
      if (search()) return true;
    }
    sigma[q][x] = -1;
    return false;
  };
  res.answer = search();
  return res;
}

int epsilon_horizon(const WeightedAutomaton& a, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  const Rational& l = a.lambda.value();
  Rational tail = a.W() / (Rational(1) - l), quarter = eps / 4;
  int N = 0;
  while (!(tail < quarter)) {
    tail *= l;
    ++N;
  }
  return N;
}

EpsilonGap epsilon_gap(const WeightedAutomaton& a, const Rational& r, const Rational& eps, const SearchOptions& opt) {
  int N = epsilon_horizon(a, eps);
  const Rational& l = a.lambda.value();
  Rational target = r + eps / 2, two_w = 2 * a.W() / (Rational(1) - l);
  std::unordered_map<std::string, bool> memo;
  std::uint64_t states = 0;

  // Eve wins from (q, g = f - c) at step s
  std::function<bool(int, const SubsetMap&, int)> win = [&](int q, const SubsetMap& g, int s) -> bool {
    std::optional<Rational> D;
    for (auto& x : g)
      if (x && (!D || *x > *D)) D = *x;
    if (s == N) return *D <= target;
    Rational rem = two_w * (a.lambda.pow(s) - a.lambda.pow(N));
    if (*D + rem <= target) return true;
    if (*D - rem > target) return false;
    auto k = key_of(q, s, g);
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    if (++states > opt.budget) throw BudgetExceeded(states, s);
    const Rational& lp = a.lambda.pow(s);
    bool eve = true;
    for (int x = 0; x < (int)a.alphabet.size() && eve; ++x) {
      auto f2 = subset_step(a, g, x, s);
      bool any = false;
      for (int t : a.out[q][x]) {
        auto& tr = a.trans[t];
        if (win(tr.dst, shifted(f2, lp * tr.w), s + 1)) {
          any = true;
          break;
        }
      }
      eve = any;
    }
    memo[k] = eve;
    return eve;
  };
  bool yes = win(a.init, subset_start(a), 0);
  return {yes, N, states};
}

Interval oracle_interval_word(const WeightedAutomaton& a, int depth, const SearchOptions& opt) {
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  auto h = automaton_graph(a);
  auto U = one_player_values(h, Objective::Max);
  auto L = one_player_values(h, Objective::Min);
  std::unordered_map<std::string, Interval> memo;
  std::uint64_t nodes = 0;
  Rational zero(0);

  std::function<Interval(int, const SubsetMap&, int)> go = [&](int q, const SubsetMap& g, int d) -> Interval {
    auto k = key_of(q, d, g);
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    if (++nodes > opt.budget) throw BudgetExceeded(nodes, d);
    const Rational& lp = a.lambda.pow(d);
    Interval r;
    if (d == depth) {
      std::optional<Rational> hi, lo;
      for (int s = 0; s < a.size(); ++s)
        if (g[s]) {
          Rational x = *g[s] + lp * U[s], y = *g[s] + lp * L[s];
          if (!hi || x > *hi) hi = x;
          if (!lo || y > *lo) lo = y;
        }
      r = {max(zero, *lo - lp * U[q]), max(zero, *hi - lp * L[q])};
    } else {
      std::optional<Interval> adam;
      for (int x = 0; x < (int)a.alphabet.size(); ++x) {
        auto f2 = subset_step(a, g, x, d);
        std::optional<Interval> eve;
        for (int t : a.out[q][x]) {
          auto& tr = a.trans[t];
          auto c = go(tr.dst, shifted(f2, lp * tr.w), d + 1);
          if (!eve) eve = c;
          else eve = Interval{min(eve->low, c.low), min(eve->high, c.high)};
        }
        if (!adam) adam = eve;
        else adam = Interval{max(adam->low, eve->low), max(adam->high, eve->high)};
      }
      r = *adam;
    }
    memo[k] = r;
    return r;
  };
  return go(a.init, subset_start(a), 0);
}

}  // namespace regret
