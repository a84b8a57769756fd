#include "regret/regret_positional.hpp"

#include <deque>
#include <functional>
#include <numeric>
#include <optional>
#include <unordered_map>

namespace regret {

static bool has_choice(const WeightedArena& g, int u) { return !g.is_eve(u) && g.out[u].size() > 1; }

bool Knowledge::allows(const WeightedArena& g, int u, int v) const {
  return g.is_eve(u) || fixed[u] < 0 || fixed[u] == v;
}

Knowledge Knowledge::after(const WeightedArena& g, int u, int v) const {
  Knowledge k = *this;
  if (has_choice(g, u)) k.fixed[u] = v;
  return k;
}

Knowledge initial_knowledge(const WeightedArena& g) { return {std::vector<int>(g.size(), -1)}; }

Knowledge knowledge_of(const WeightedArena& g, const PlayPrefix& p) {
  Knowledge k = initial_knowledge(g);
  for (int i = 0; i + 1 < p.size(); ++i) k = k.after(g, p[i], p[i + 1]);
  return k;
}

EdgeSet edges_of(const WeightedArena& g, const Knowledge& k) {
  EdgeSet s;
  for (auto& e : g.edges)
    if (k.allows(g, e.src, e.dst)) s.insert({e.src, e.dst});
  return s;
}

EdgeSet allowed_edges(const WeightedArena& g, const PlayPrefix& p) { return edges_of(g, knowledge_of(g, p)); }

GameGraph restrict(const WeightedArena& g, const Knowledge& k) {
  GameGraph h;
  h.lambda = g.lambda.value();
  for (int u = 0; u < g.size(); ++u) h.add_vertex(g.owner[u]);
  for (auto& e : g.edges)
    if (k.allows(g, e.src, e.dst)) h.succ[e.src].push_back({e.dst, e.w});
  return h;
}

// best w(u,v') + lambda cval(v') over out-edges of u other than v, within the edges `ok` keeps
template <class Ok>
static Rational best_excluding(const WeightedArena& g, const std::vector<Rational>& cval, int u, int v, Ok ok) {
  std::optional<Rational> m;
  for (int e : g.out[u]) {
    auto& ed = g.edges[e];
    if (ed.dst == v || !ok(ed)) continue;
    Rational c = ed.w + g.lambda.value() * cval[ed.dst];
    if (!m || c > *m) m = c;
  }
  if (!m) throw std::invalid_argument("no alternative edge at " + g.names[u]);
  return *m;
}

AdamProfiles::AdamProfiles(const WeightedArena& g, std::uint64_t limit) : g_(&g) {
  std::vector<int> who;
  std::uint64_t total = 1;
  for (int u = 0; u < g.size(); ++u)
    if (has_choice(g, u)) {
      who.push_back(u);
      total *= g.out[u].size();
      if (total > limit) throw BudgetExceeded(total, 0);
    }
  std::vector<int> idx(who.size(), 0);
  while (true) {
    std::vector<int> c(g.size(), -1);
    for (int u = 0; u < g.size(); ++u)
      if (!g.is_eve(u)) c[u] = g.edges[g.out[u][0]].dst;
    for (std::size_t i = 0; i < who.size(); ++i) c[who[i]] = g.edges[g.out[who[i]][idx[i]]].dst;
    GameGraph h;
    h.lambda = g.lambda.value();
    for (int u = 0; u < g.size(); ++u) h.add_vertex(g.owner[u]);
    for (auto& e : g.edges)
      if (g.is_eve(e.src) || c[e.src] == e.dst) h.succ[e.src].push_back({e.dst, e.w});
    cval_.push_back(one_player_values(h, Objective::Max));
    choice_.push_back(std::move(c));
    std::size_t i = 0;
    while (i < who.size() && ++idx[i] == (int)g.out[who[i]].size()) idx[i++] = 0;
    if (i == who.size()) break;
  }
}

bool AdamProfiles::consistent(int t, const Knowledge& k) const {
  for (int u = 0; u < (int)k.fixed.size(); ++u)
    if (k.fixed[u] >= 0 && choice_[t][u] != k.fixed[u]) return false;
  return true;
}

Rational AdamProfiles::cval_excluding(int t, int u, int v) const {
  auto& c = choice_[t];
  return best_excluding(*g_, cval_[t], u, v, [&](const Edge& e) { return g_->is_eve(e.src) || c[e.src] == e.dst; });
}

// w(u,v) + lambda cVal^v(G x tau) against the best alternative; positive means bad
static Rational tau_gap(const WeightedArena& g, const AdamProfiles& prof, int t, int u, int v) {
  return prof.cval_excluding(t, u, v) - g.edges[g.edge_index(u, v)].w - g.lambda.value() * prof.cval(t)[v];
}

bool knowledge_bad_edge(const WeightedArena& g, const AdamProfiles& prof, const Knowledge& k, int u, int v) {
  for (int t = 0; t < prof.count(); ++t)
    if (prof.consistent(t, k) && tau_gap(g, prof, t, u, v).sign() > 0) return true;
  return false;
}

bool knowledge_bad_edge(const WeightedArena& g, const Knowledge& k, int u, int v) {
  return knowledge_bad_edge(g, AdamProfiles(g), k, u, v);
}

int KnowledgeArena::find(int v, int set) const {
  auto it = index.find({v, set});
  return it == index.end() ? -1 : it->second;
}

KnowledgeArena knowledge_arena(const WeightedArena& g, const AdamProfiles& prof, std::uint64_t budget) {
  KnowledgeArena ka;
  std::map<Knowledge, int> intern;
  auto set_id = [&](const Knowledge& k) {
    auto [it, fresh] = intern.emplace(k, (int)ka.sets.size());
    if (fresh) ka.sets.push_back(k);
    return it->second;
  };
  auto node_id = [&](int v, int s) {
    auto [it, fresh] = ka.index.emplace(std::pair{v, s}, (int)ka.nodes.size());
    if (fresh) {
      ka.nodes.push_back({v, s});
      if (ka.nodes.size() > budget) throw BudgetExceeded(ka.nodes.size(), 0);
    }
    return it->second;
  };
  // per set, which edges some consistent tau makes bad
  std::vector<std::vector<bool>> bad_by_set;
  auto bad_of = [&](int s) -> const std::vector<bool>& {
    while ((int)bad_by_set.size() <= s) bad_by_set.emplace_back();
    auto& b = bad_by_set[s];
    if (b.empty()) {
      b.assign(g.edges.size(), false);
      for (int t = 0; t < prof.count(); ++t) {
        if (!prof.consistent(t, ka.sets[s])) continue;
        for (int e = 0; e < (int)g.edges.size(); ++e)
          if (!b[e] && g.is_eve(g.edges[e].src) && tau_gap(g, prof, t, g.edges[e].src, g.edges[e].dst).sign() > 0)
            b[e] = true;
      }
    }
    return b;
  };
  node_id(g.init, set_id(initial_knowledge(g)));
  for (std::size_t n = 0; n < ka.nodes.size(); ++n) {
    auto [v, s] = ka.nodes[n];
    std::vector<int> succ;
    std::vector<bool> bad;
    for (int e : g.out[v]) {
      int t = g.edges[e].dst;
      if (!ka.sets[s].allows(g, v, t)) continue;
      int s2 = g.is_eve(v) ? s : set_id(ka.sets[s].after(g, v, t));
      succ.push_back(node_id(t, s2));
      bad.push_back(g.is_eve(v) && bad_of(s)[e]);
    }
    ka.succ.push_back(std::move(succ));
    ka.bad.push_back(std::move(bad));
  }
  return ka;
}

static SafetyGame knowledge_safety(const WeightedArena& g, const KnowledgeArena& ka) {
  SafetyGame sg;
  for (auto [v, s] : ka.nodes) sg.owner.push_back(g.owner[v]);
  sg.succ = ka.succ;
  sg.bad = ka.bad;
  sg.init = 0;
  return sg;
}

ZeroRegretPositional zero_regret_positional(const WeightedArena& g, const SearchOptions& opt) {
  AdamProfiles prof(g);
  ZeroRegretPositional z{false, knowledge_arena(g, prof, opt.budget), {}};
  auto& ka = z.arena;
  auto res = solve_safety(knowledge_safety(g, ka));
  z.answer = res.winner == Player::Eve;
  Player who = z.answer ? Player::Eve : Player::Adam;
  auto& arcs = z.answer ? res.eve_strategy : res.adam_strategy;
  z.witness.assign(ka.nodes.size(), -1);
  for (std::size_t n = 0; n < ka.nodes.size(); ++n)
    if (g.owner[ka.nodes[n].first] == who) z.witness[n] = ka.nodes[ka.succ[n][arcs[n]]].first;
  return z;
}

Rational witness_regret(const WeightedArena& g, const ZeroRegretPositional& z) {
  AdamProfiles prof(g);
  auto& ka = z.arena;
  Rational worst(0);
  for (int t = 0; t < prof.count(); ++t) {
    auto& tau = prof.choice(t);
    std::vector<int> seen(ka.nodes.size(), -1), path;
    std::vector<Rational> w;
    int n = 0;
    while (seen[n] < 0) {
      seen[n] = (int)path.size();
      path.push_back(n);
      auto [v, s] = ka.nodes[n];
      int target = g.is_eve(v) ? z.witness[n] : tau[v];
      int next = -1;
      for (int m : ka.succ[n])
        if (ka.nodes[m].first == target) next = m;
      if (next < 0) throw std::logic_error("witness leaves the knowledge arena");
      w.push_back(g.edges[g.edge_index(v, target)].w);
      n = next;
    }
    // stem then cycle
    int k = seen[n];
    std::vector<Rational> stem(w.begin(), w.begin() + k), cyc(w.begin() + k, w.end());
    Rational payoff = discounted_sum(stem, g.lambda) +
                      g.lambda.pow(k) * discounted_sum(cyc, g.lambda) /
                          (Rational(1) - g.lambda.pow((int)cyc.size()));
    Rational r = prof.cval(t)[g.init] - payoff;
    if (r > worst) worst = r;
  }
  return worst;
}

mpz_class value_denominator(const WeightedArena& g) {
  mpz_class a = g.lambda.alpha(), b = g.lambda.beta(), an, bn;
  mpz_pow_ui(an.get_mpz_t(), a.get_mpz_t(), g.size());
  mpz_pow_ui(bn.get_mpz_t(), b.get_mpz_t(), g.size());
  return bn * (bn - an);
}

mpz_class value_denominator_lcm(const WeightedArena& g) {
  mpz_class a = g.lambda.alpha(), b = g.lambda.beta(), l = 1, al = 1, bl = 1;
  for (int i = 1; i <= g.size(); ++i) {
    al *= a;
    bl *= b;
    mpz_class d = bl - al;
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  return bl * l;
}

Rational lower_bound_b(const WeightedArena& g) {
  AdamProfiles prof(g);
  auto ka = knowledge_arena(g, prof);
  if (solve_safety(knowledge_safety(g, ka)).winner == Player::Eve)
    throw std::invalid_argument("lower_bound_b: Eve wins the knowledge safety game");
  std::optional<Rational> m;
  for (std::size_t n = 0; n < ka.nodes.size(); ++n) {
    auto [u, s] = ka.nodes[n];
    for (std::size_t a = 0; a < ka.succ[n].size(); ++a) {
      if (!ka.bad[n][a]) continue;
      int v = ka.nodes[ka.succ[n][a]].first;
      for (int t = 0; t < prof.count(); ++t) {
        if (!prof.consistent(t, ka.sets[s])) continue;
        Rational gap = tau_gap(g, prof, t, u, v);
        if (gap.sign() > 0 && (!m || gap < *m)) m = gap;
      }
    }
  }
  return g.lambda.pow(g.size() * ((int)g.edges.size() + 1)) * *m;
}

long horizon_nu(const WeightedArena& g, const Rational& b) {
  if (b.sign() <= 0) throw std::invalid_argument("horizon_nu: b must be positive");
  long n = horizon_N(b, g.W(), g.lambda);
  if (g.W().is_zero()) return n;
  mpz_class bN;
  mpz_pow_ui(bN.get_mpz_t(), g.lambda.beta().get_mpz_t(), n + g.size());
  mpz_class an, bn;
  mpz_pow_ui(an.get_mpz_t(), g.lambda.alpha().get_mpz_t(), g.size());
  mpz_pow_ui(bn.get_mpz_t(), g.lambda.beta().get_mpz_t(), g.size());
  Rational target(Rational(1) / Rational(mpq_class(bN * (bn - an))));
  Rational lhs = g.W() / (Rational(1) - g.lambda.value());
  long k = 0;
  while (!(lhs < target)) {
    lhs *= g.lambda.value();
    ++k;
  }
  return n + k;
}

DeviationLedger DeviationLedger::of(const PlayPrefix& p) {
  DeviationLedger l;
  auto& g = p.arena();
  for (int i = 0; i + 1 < p.size(); ++i)
    if (g.is_eve(p[i])) l.entries.push_back({i, p[i], p[i + 1], p.D(i)});
  l.D_now = p.D(p.size() - 1);
  return l;
}

static std::vector<Rational> prefix_candidates(const WeightedArena& g, const PlayPrefix& p, const Knowledge& k) {
  auto cv = one_player_values(restrict(g, k), Objective::Max);
  return DeviationLedger::of(p).candidates(g.lambda, [&](const DeviationLedger::Entry& e) {
    return best_excluding(g, cv, e.v, e.next, [&](const Edge& x) { return k.allows(g, x.src, x.dst); });
  });
}

Rational prefix_regret_positional(const WeightedArena& g, const PlayPrefix& p) {
  Rational r(0);
  for (auto& c : prefix_candidates(g, p, knowledge_of(g, p))) r = max(r, c);
  return r;
}

MaxRegret mrp_mrs(const WeightedArena& g, const PlayPrefix& p) {
  Knowledge k = knowledge_of(g, p);
  auto cands = prefix_candidates(g, p, k);
  auto ledger = DeviationLedger::of(p);
  auto cv = one_player_values(restrict(g, k), Objective::Max);
  Rational r(0);
  for (auto& c : cands) r = max(r, c);
  MaxRegret out;
  for (std::size_t j = 0; j < cands.size(); ++j)
    if (cands[j] == r) out.mrp.push_back(ledger.entries[j].i);
  AdamProfiles prof(g);
  for (int t = 0; t < prof.count(); ++t) {
    if (!prof.consistent(t, k)) continue;
    bool keep = out.mrp.empty();
    for (std::size_t j = 0; j < cands.size() && !keep; ++j) {
      if (cands[j] != r) continue;
      auto& e = ledger.entries[j];
      Rational here = best_excluding(g, cv, e.v, e.next, [&](const Edge& x) { return k.allows(g, x.src, x.dst); });
      keep = prof.cval_excluding(t, e.v, e.next) == here;
    }
    if (keep) out.mrs.push_back(prof.strategy(t));
  }
  return out;
}

namespace {

// Min-max over (knowledge node, depth).  Value at (n, d) is
// inf_Eve sup_Adam of F(C_final) - sum_{t>=d} lambda^t w_t.
struct PositionalSearch {
  const WeightedArena& g;
  const KnowledgeArena& ka;
  const std::vector<Rational>& F;       // per knowledge set
  const std::vector<Rational>& tail;    // aVal in the F-preserving arena, per node
  const std::vector<std::vector<Rational>>& w;  // arc weights
  long cutoff;
  const SearchOptions& opt;
  std::uint64_t nodes = 0;
  std::vector<std::unordered_map<long, Rational>> memo;

  Rational value(int n, long d) {
    if (d == cutoff) return F[ka.nodes[n].second] - g.lambda.pow(d) * tail[n];
    auto it = memo[n].find(d);
    if (it != memo[n].end()) return it->second;
    if (++nodes > opt.budget) throw BudgetExceeded(nodes, (int)d);
    bool eve = g.is_eve(ka.nodes[n].first);
    std::optional<Rational> best;
    for (std::size_t a = 0; a < ka.succ[n].size(); ++a) {
      Rational x = value(ka.succ[n][a], d + 1) - g.lambda.pow(d) * w[n][a];
      if (!best || (eve ? x < *best : x > *best)) best = x;
    }
    memo[n].emplace(d, *best);
    return *best;
  }
};

}  // namespace

PositionalRegretResult regret_positional(const WeightedArena& g, const SearchOptions& opt,
                                         const PositionalOptions& popt) {
  AdamProfiles prof(g);
  auto ka = knowledge_arena(g, prof, opt.budget);
  bool eve_wins = solve_safety(knowledge_safety(g, ka)).winner == Player::Eve;
  PositionalRegretResult res;
  if (eve_wins && popt.zero_shortcut) return res;

  std::vector<Rational> F;
  for (auto& k : ka.sets) F.push_back(one_player_values(restrict(g, k), Objective::Max)[g.init]);
  std::optional<Rational> gap;
  for (std::size_t i = 0; i < F.size(); ++i)
    for (std::size_t j = 0; j < F.size(); ++j)
      if (F[i] > F[j] && (!gap || F[i] - F[j] < *gap)) gap = F[i] - F[j];
  long exact = gap ? horizon_N(*gap, g.W(), g.lambda) : 0;
  res.cutoff = popt.cutoff < 0 ? exact : popt.cutoff;
  if (res.cutoff < exact) throw std::invalid_argument("cutoff below " + std::to_string(exact));

  // past the cutoff Adam never gives up co-operative value: keep only the
  // Adam moves that preserve F and play it out antagonistically
  std::vector<std::vector<Rational>> w(ka.nodes.size());
  GameGraph h;
  h.lambda = g.lambda.value();
  for (std::size_t n = 0; n < ka.nodes.size(); ++n) {
    auto [v, s] = ka.nodes[n];
    h.add_vertex(g.owner[v]);
    for (int m : ka.succ[n]) {
      int t = ka.nodes[m].first;
      w[n].push_back(g.edges[g.edge_index(v, t)].w);
      if (g.is_eve(v) || F[ka.nodes[m].second] == F[s]) h.succ[n].push_back({m, w[n].back()});
    }
  }
  auto tail = antagonistic_values(h);

  PositionalSearch search{g, ka, F, tail, w, res.cutoff, opt, 0, std::vector<std::unordered_map<long, Rational>>(ka.nodes.size())};
  res.value = search.value(0, 0);
  res.nodes = search.nodes;
  if (!eve_wins) res.horizon = horizon_nu(g, lower_bound_b(g));
  return res;
}

Interval oracle_interval_positional(const WeightedArena& g, int depth, const SearchOptions& opt) {
  if (depth < 1) throw std::invalid_argument("oracle depth must be >= 1");
  AdamProfiles prof(g);
  const Rational T = g.W() / (Rational(1) - g.lambda.value());
  std::map<Knowledge, int> intern;
  std::vector<Knowledge> sets;
  // per set and Eve edge: bounds on cVal excluding it over all final knowledge
  std::vector<std::vector<Rational>> lowC, highC;
  auto set_id = [&](const Knowledge& k) {
    auto [it, fresh] = intern.emplace(k, (int)sets.size());
    if (fresh) {
      sets.push_back(k);
      auto cv = one_player_values(restrict(g, k), Objective::Max);
      std::vector<Rational> lo(g.edges.size()), hi(g.edges.size());
      for (int e = 0; e < (int)g.edges.size(); ++e) {
        int u = g.edges[e].src, v = g.edges[e].dst;
        if (!g.is_eve(u)) continue;
        hi[e] = best_excluding(g, cv, u, v, [&](const Edge& x) { return k.allows(g, x.src, x.dst); });
        std::optional<Rational> m;
        for (int t = 0; t < prof.count(); ++t)
          if (prof.consistent(t, k)) {
            Rational c = prof.cval_excluding(t, u, v);
            if (!m || c < *m) m = c;
          }
        lo[e] = *m;
      }
      lowC.push_back(std::move(lo));
      highC.push_back(std::move(hi));
    }
    return it->second;
  };

  struct Dev {
    int i, e;
    Rational D;
  };
  std::vector<Dev> devs;
  std::uint64_t nodes = 0;
  std::function<Interval(int, int, int, const Rational&)> go = [&](int v, int d, int s, const Rational& D) -> Interval {
    if (++nodes > opt.budget) throw BudgetExceeded(nodes, d);
    if (d == depth) {
      const Rational& ld = g.lambda.pow(d);
      std::optional<Rational> lo, hi;
      for (auto& x : devs) {
        Rational base = -(D - x.D);
        Rational a = g.lambda.pow(x.i) * lowC[s][x.e] + base, b = g.lambda.pow(x.i) * highC[s][x.e] + base;
        if (!lo || a > *lo) lo = a;
        if (!hi || b > *hi) hi = b;
      }
      Interval r{Rational(0), Rational(2) * ld * T};
      if (lo) r.low = max(r.low, *lo - ld * T);
      if (hi) r.high = max(r.high, *hi + ld * T);
      return r;
    }
    bool eve = g.is_eve(v);
    std::optional<Interval> best;
    for (int e : g.out[v]) {
      int t = g.edges[e].dst;
      if (!sets[s].allows(g, v, t)) continue;
      int s2 = eve ? s : set_id(sets[s].after(g, v, t));
      if (eve) devs.push_back({d, e, D});
      Interval x = go(t, d + 1, s2, D + g.lambda.pow(d) * g.edges[e].w);
      if (eve) devs.pop_back();
      if (!best) {
        best = x;
      } else if (eve) {
        best->low = min(best->low, x.low);
        best->high = min(best->high, x.high);
      } else {
        best->low = max(best->low, x.low);
        best->high = max(best->high, x.high);
      }
    }
    return *best;
  };
  return go(g.init, 0, set_id(initial_knowledge(g)), Rational(0));
}

}  // namespace regret
