#include "regret/regret_all.hpp"

#include <functional>
#include <map>
#include <unordered_map>

namespace regret {

int Lasso::at(long i) const {
  if (i < (long)stem.size()) return stem[i];
  return cycle[(i - stem.size()) % cycle.size()];
}

EdgeSet bad_edges(const WeightedArena& g, const ValueTable& vt) {
  EdgeSet bad;
  for (auto& e : g.edges) {
    if (!g.is_eve(e.src)) continue;
    if (e.w + g.lambda.value() * vt.aval[e.dst] < coop_value_excluding(g, vt, e.src, e.dst)) bad.insert({e.src, e.dst});
  }
  return bad;
}

static PositionalStrategy strategy_from_arcs(const WeightedArena& g, Player who, const std::vector<int>& arcs) {
  PositionalStrategy s{who, std::vector<int>(g.size(), -1)};
  for (int u = 0; u < g.size(); ++u)
    if (g.owner[u] == who) s.choice[u] = g.edges[g.out[u][arcs[u]]].dst;
  return s;
}

ZeroRegretAll zero_regret_all(const WeightedArena& g) {
  auto vt = compute_values(g);
  auto res = solve_safety(safety_game(g, bad_edges(g, vt)));
  if (res.winner == Player::Eve) return {true, strategy_from_arcs(g, Player::Eve, res.eve_strategy)};
  return {false, strategy_from_arcs(g, Player::Adam, res.adam_strategy)};
}

static Rational locreg_edge(const WeightedArena& g, const ValueTable& vt, int u, int v) {
  // locreg(uv, 0): cVal excluding v, minus the edge, minus the discounted aVal after it
  return coop_value_excluding(g, vt, u, v) - g.edges[g.edge_index(u, v)].w - g.lambda.value() * vt.aval[v];
}

static Rational lower_bound_a(const WeightedArena& g, const ValueTable& vt) {
  auto bad = bad_edges(g, vt);
  if (bad.empty()) throw std::invalid_argument("lower_bound_a: no bad edges, the arena admits a regret-free strategy");
  std::optional<Rational> m;
  for (auto [u, v] : bad) {
    Rational c = locreg_edge(g, vt, u, v);
    if (!m || c < *m) m = c;
  }
  return g.lambda.pow(g.size()) * *m;
}

Rational lower_bound_a(const WeightedArena& g) { return lower_bound_a(g, compute_values(g)); }

int horizon_N(const Rational& r, const Rational& W, const DiscountFactor& l) {
  if (r.sign() <= 0) throw std::invalid_argument("horizon_N: r must be positive");
  if (W.is_zero()) return 0;
  Rational lhs = Rational(2) * W / (Rational(1) - l.value());
  int n = 0;
  while (!(lhs < r)) {
    lhs *= l.value();
    ++n;
  }
  return n;
}

Rational locreg(const WeightedArena& g, const ValueTable& vt, const PlayPrefix& p, int i) {
  if (i < 0 || i >= p.size()) throw std::out_of_range("locreg: index out of range");
  int vi = p[i];
  if (!g.is_eve(vi)) throw std::invalid_argument("locreg: v_i is not Eve's");
  const Rational& li = g.lambda.pow(i);
  if (i == p.size() - 1) return li * (vt.cval[vi] - vt.aval[vi]);
  int j = p.size() - 1;
  Rational disc = (p.D(j) - p.D(i)) / li;
  return li * (coop_value_excluding(g, vt, vi, p[i + 1]) - disc) - g.lambda.pow(j) * vt.aval[p[j]];
}

Rational locreg(const WeightedArena& g, const ValueTable& vt, const Lasso& play, int i) {
  int vi = play.at(i);
  if (!g.is_eve(vi)) throw std::invalid_argument("locreg: v_i is not Eve's");
  // Disc of the suffix from i: walk to the first return into the cycle, closed form there
  long start = std::max<long>(i, (long)play.stem.size());
  Rational pre(0), p(1);
  for (long t = i; t < start; ++t) {
    pre += p * g.edges[g.edge_index(play.at(t), play.at(t + 1))].w;
    p *= g.lambda.value();
  }
  Rational cyc(0), q(1);
  for (std::size_t t = 0; t < play.cycle.size(); ++t) {
    cyc += q * g.edges[g.edge_index(play.at(start + t), play.at(start + t + 1))].w;
    q *= g.lambda.value();
  }
  Rational disc = pre + p * cyc / (Rational(1) - q);
  return g.lambda.pow(i) * (coop_value_excluding(g, vt, vi, play.at(i + 1)) - disc);
}

Rational prefix_regret(const WeightedArena& g, const ValueTable& vt, const PlayPrefix& p) {
  Rational best(0);
  int j = p.size() - 1;
  for (int i = 0; i < j; ++i) {
    if (!g.is_eve(p[i])) continue;
    Rational c = g.lambda.pow(i) * coop_value_excluding(g, vt, p[i], p[i + 1]) + p.D(i) - p.D(j);
    best = max(best, c);
  }
  return best;
}

namespace {

struct Key {
  int v, d;
  bool has;
  Rational m;
  bool operator==(const Key& o) const { return v == o.v && d == o.d && has == o.has && (!has || m == o.m); }
};
struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::size_t h = (std::size_t)k.v * 1000003u + (std::size_t)k.d * 7919u + k.has;
    return k.has ? h ^ (k.m.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)) : h;
  }
};

// Facts shared by the unfolding searches: excluded cVal per edge and the
// collapse constants.
struct Context {
  const WeightedArena& g;
  ValueTable vt;
  std::vector<Rational> dval;
  std::vector<Rational> cex;  // per edge index, cVal excluding its target (Eve sources only)
  Rational cneg, dpos;

  explicit Context(const WeightedArena& g_) : g(g_), vt(compute_values(g_)), dval(min_value(g_)), cex(g_.edges.size()) {
    for (int e = 0; e < (int)g.edges.size(); ++e)
      if (g.is_eve(g.edges[e].src)) cex[e] = coop_value_excluding(g, vt, g.edges[e].src, g.edges[e].dst);
    cneg = dpos = Rational(0);
    for (int v = 0; v < g.size(); ++v) {
      cneg = max(cneg, -vt.cval[v]);
      dpos = max(dpos, dval[v]);
    }
  }
};

// min-max with leaf max(margin, 0) - lambda^N aVal(v_N)
struct AllSearch {
  Context& c;
  int N;
  const SearchOptions& opt;
  std::uint64_t nodes = 0;
  std::unordered_map<Key, Rational, KeyHash> memo;

  Rational solve(int v, int d, std::optional<Rational> m) {
    const auto& g = c.g;
    const Rational& ld = g.lambda.pow(d);
    if (m) {
      // margin dominates every later deviation and stays nonnegative
      if (*m >= ld * c.vt.cval[v] + g.lambda.pow(N) * c.cneg) return *m - ld * c.vt.aval[v];
      // margin can never become positive again, forget it
      if (*m <= ld * c.dval[v] - g.lambda.pow(N) * c.dpos) m.reset();
    }
    if (d == N) return (m ? max(*m, Rational(0)) : Rational(0)) - ld * c.vt.aval[v];
    Key key{v, d, (bool)m, m ? *m : Rational(0)};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    if (++nodes > opt.budget) throw BudgetExceeded(nodes, d);
    bool eve = g.is_eve(v);
    std::optional<Rational> best;
    for (int e : g.out[v]) {
      const auto& ed = g.edges[e];
      std::optional<Rational> m2;
      if (eve) {
        Rational cand = ld * c.cex[e];
        m2 = (m ? max(*m, cand) : cand) - ld * ed.w;
      } else if (m) {
        m2 = *m - ld * ed.w;
      }
      Rational r = solve(ed.dst, d + 1, m2);
      if (!best || (eve ? r < *best : r > *best)) best = r;
    }
    memo.emplace(std::move(key), *best);
    return *best;
  }
};

}  // namespace

RegretResult regret_all(const WeightedArena& g, const SearchOptions& opt, int horizon) {
  Context c(g);
  auto res = solve_safety(safety_game(g, bad_edges(g, c.vt)));
  if (res.winner == Player::Eve && horizon < 0) return {Rational(0), 0, 0};
  int N = horizon;
  if (N < 0) N = horizon_N(lower_bound_a(g, c.vt), g.W(), g.lambda);
  AllSearch s{c, N, opt, 0, {}};
  Rational v = s.solve(g.init, 0, std::nullopt);
  return {v, N, s.nodes};
}

bool regret_threshold_all(const WeightedArena& g, const Rational& r, bool strict, const SearchOptions& opt) {
  Rational v = regret_all(g, opt).value;
  return strict ? v < r : v <= r;
}

Rational regret_all_naive(const WeightedArena& g, int N) {
  auto vt = compute_values(g);
  PlayPrefix p(g, g.init);
  std::function<Rational(const PlayPrefix&)> rec = [&](const PlayPrefix& pre) -> Rational {
    int v = pre.back();
    if (pre.size() == N + 1) return prefix_regret(g, vt, pre) - g.lambda.pow(N) * vt.aval[v];
    std::optional<Rational> best;
    for (int e : g.out[v]) {
      PlayPrefix q = pre;
      q.push(g.edges[e].dst);
      Rational r = rec(q);
      if (!best || (g.is_eve(v) ? r < *best : r > *best)) best = r;
    }
    return *best;
  };
  return rec(p);
}

int OTPStrategy::choose(int v, long depth) const {
  if (sigma_cw.choice[v] < 0) throw std::invalid_argument("OTP queried at a vertex that is not Eve's");
  if (eligible[v] && lambda.pow((int)depth) * pending[v] > t) return sigma_co.choice[v];
  return sigma_cw.choice[v];
}

OTPStrategy synth_otp(const WeightedArena& g, const Rational& t) {
  auto vt = compute_values(g);
  auto cs = canonical_strategies(g, vt);
  OTPStrategy s;
  s.lambda = g.lambda;
  s.sigma_co = cs.sigma_co;
  s.sigma_cw = cs.sigma_cw;
  s.t = t;
  s.eligible.assign(g.size(), false);
  s.pending.assign(g.size(), Rational(0));
  s.switch_depth = 0;
  for (int u = 0; u < g.size(); ++u) {
    if (!g.is_eve(u)) continue;
    int x = cs.sigma_cw(u);
    s.pending[u] = locreg_edge(g, vt, u, x);
    s.eligible[u] = cs.copt[u].size() == 1;
    if (!s.eligible[u]) continue;
    // lambda^n * L is monotone in n, so the test flips at most once
    const Rational& L = s.pending[u];
    bool p0 = L > t;
    bool pinf = Rational(0) > t;
    if (L.is_zero() || p0 == pinf) continue;
    long n = 0;
    while ((g.lambda.pow((int)n) * L > t) == p0) ++n;
    s.switch_depth = std::max(s.switch_depth, n);
  }
  return s;
}

CounterStrategy to_counter(const WeightedArena& g, const OTPStrategy& s) {
  CounterStrategy c;
  c.k = s.switch_depth;
  c.post = {Player::Eve, std::vector<int>(g.size(), -1)};
  for (int v = 0; v < g.size(); ++v)
    if (g.is_eve(v)) c.post.choice[v] = s.choose(v, c.k);
  c.table.assign(c.k, std::vector<int>(g.size(), -1));
  for (long d = 0; d < c.k; ++d)
    for (int v = 0; v < g.size(); ++v)
      if (g.is_eve(v)) c.table[d][v] = s.choose(v, d);
  return c;
}

namespace {

// Adam-only search against a fixed counter strategy, leaf
// max(margin - lambda^N val_post, 0).
struct EvalSearch {
  Context& c;
  const CounterStrategy& s;
  int N;
  std::vector<std::vector<Rational>> Q;  // Q[d][v]: least discounted future payoff under s
  const SearchOptions& opt;
  std::uint64_t nodes = 0;
  std::unordered_map<Key, Rational, KeyHash> memo;

  Rational solve(int v, int d, std::optional<Rational> m) {
    const auto& g = c.g;
    const Rational& ld = g.lambda.pow(d);
    if (m) {
      if (*m >= ld * c.vt.cval[v]) return max(*m - Q[d][v], Rational(0));
      if (*m <= ld * c.dval[v]) m.reset();
    }
    if (d == N) return m ? max(*m - Q[d][v], Rational(0)) : Rational(0);
    Key key{v, d, (bool)m, m ? *m : Rational(0)};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    if (++nodes > opt.budget) throw BudgetExceeded(nodes, d);
    Rational best(0);
    if (g.is_eve(v)) {
      int e = g.edge_index(v, s.choose(v, d));
      Rational cand = ld * c.cex[e];
      best = solve(g.edges[e].dst, d + 1, (m ? max(*m, cand) : cand) - ld * g.edges[e].w);
    } else {
      bool first = true;
      for (int e : g.out[v]) {
        std::optional<Rational> m2;
        if (m) m2 = *m - ld * g.edges[e].w;
        Rational r = solve(g.edges[e].dst, d + 1, m2);
        if (first || r > best) best = r;
        first = false;
      }
    }
    memo.emplace(std::move(key), best);
    return best;
  }
};

}  // namespace

// regret(s) = sup over consistent plays of the play regret, split into
// deviations before N (tree search) and at or after N (reachability; there
// s is positional and Adam can hold Eve to val_post after any deviation).
Rational eval_strategy_regret(const WeightedArena& g, const CounterStrategy& s, bool check_post,
                              const SearchOptions& opt) {
  Context c(g);
  const Rational& l = g.lambda.value();
  GameGraph h = to_graph(g);
  for (int v = 0; v < g.size(); ++v) {
    if (!g.is_eve(v)) continue;
    int t = s.post(v);
    int e = g.edge_index(v, t);
    if (e < 0) throw std::invalid_argument("strategy picks a non-edge at " + g.names[v]);
    h.succ[v] = {{t, g.edges[e].w}};
    if (check_post && g.edges[e].w + l * c.vt.aval[t] != c.vt.aval[v])
      throw std::invalid_argument("post-switch strategy is not worst-case optimal at " + g.names[v]);
  }
  auto post_val = one_player_values(h, Objective::Min);
  int N = (int)s.k;
  std::vector<std::vector<Rational>> Q(N + 1, std::vector<Rational>(g.size()));
  for (int v = 0; v < g.size(); ++v) Q[N][v] = g.lambda.pow(N) * post_val[v];
  for (int d = N - 1; d >= 0; --d)
    for (int v = 0; v < g.size(); ++v) {
      const Rational& ld = g.lambda.pow(d);
      if (g.is_eve(v)) {
        int t = s.choose(v, d);
        Q[d][v] = ld * g.edges[g.edge_index(v, t)].w + Q[d + 1][t];
      } else {
        bool first = true;
        for (int e : g.out[v]) {
          Rational r = ld * g.edges[e].w + Q[d + 1][g.edges[e].dst];
          if (first || r < Q[d][v]) Q[d][v] = r;
          first = false;
        }
      }
    }
  EvalSearch es{c, s, N, std::move(Q), opt, 0, {}};
  Rational T = es.solve(g.init, 0, std::nullopt);

  Rational B(0);
  std::vector<bool> cur(g.size(), false), seen_v(g.size(), false);
  cur[g.init] = true;
  std::map<std::vector<bool>, int> seen;
  for (int d = 0;; ++d) {
    if (d >= N) {
      if (seen.count(cur)) break;
      seen[cur] = d;
      for (int v = 0; v < g.size(); ++v) {
        if (!cur[v] || seen_v[v] || !g.is_eve(v)) continue;
        seen_v[v] = true;
        int t = s.post(v);
        int e = g.edge_index(v, t);
        Rational gap = c.cex[e] - g.edges[e].w - l * post_val[t];
        B = max(B, g.lambda.pow(d) * gap);
      }
    }
    std::vector<bool> nxt(g.size(), false);
    for (int v = 0; v < g.size(); ++v) {
      if (!cur[v]) continue;
      if (g.is_eve(v))
        nxt[s.choose(v, d)] = true;
      else
        for (int e : g.out[v]) nxt[g.edges[e].dst] = true;
    }
    cur = std::move(nxt);
  }
  return max(T, B);
}

Rational eval_strategy_regret(const WeightedArena& g, const OTPStrategy& s, const SearchOptions& opt) {
  return eval_strategy_regret(g, to_counter(g, s), false, opt);
}

}  // namespace regret
