#include "regret/values.hpp"

#include <stdexcept>

namespace regret {

GameGraph to_graph(const WeightedArena& g) {
  GameGraph h;
  h.lambda = g.lambda.value();
  h.owner = g.owner;
  h.succ.resize(g.size());
  for (int u = 0; u < g.size(); ++u)
    for (int e : g.out[u]) h.succ[u].push_back({g.edges[e].dst, g.edges[e].w});
  return h;
}

std::vector<Rational> evaluate_policy(const GameGraph& g, const std::vector<int>& policy) {
  int n = g.size();
  std::vector<Rational> val(n);
  std::vector<char> state(n, 0);  // 0 new, 1 on current path, 2 done
  std::vector<int> path;
  auto next = [&](int x) { return g.succ[x][policy[x]].dst; };
  auto wt = [&](int x) -> const Rational& { return g.succ[x][policy[x]].w; };
  for (int s = 0; s < n; ++s) {
    if (state[s] == 2) continue;
    path.clear();
    int x = s;
    while (state[x] == 0) {
      state[x] = 1;
      path.push_back(x);
      x = next(x);
    }
    std::size_t stop = path.size();
    if (state[x] == 1) {
      // x closes a cycle: S/(1 - lambda^l) at x, then walk the cycle backwards
      std::size_t at = 0;
      while (path[at] != x) ++at;
      Rational S(0), p(1);
      for (std::size_t i = at; i < path.size(); ++i) {
        S += p * wt(path[i]);
        p *= g.lambda;
      }
      val[x] = S / (Rational(1) - p);
      state[x] = 2;
      for (std::size_t i = path.size(); i-- > at + 1;) {
        val[path[i]] = wt(path[i]) + g.lambda * val[next(path[i])];
        state[path[i]] = 2;
      }
      stop = at;
    }
    for (std::size_t i = stop; i-- > 0;) {
      val[path[i]] = wt(path[i]) + g.lambda * val[next(path[i])];
      state[path[i]] = 2;
    }
  }
  return val;
}

std::vector<Rational> one_player_values(const GameGraph& g, Objective obj, std::vector<int>* policy_out) {
  int n = g.size();
  std::vector<int> pol(n, 0);
  for (int u = 0; u < n; ++u)
    if (g.succ[u].empty()) throw std::invalid_argument("sink in game graph");
  while (true) {
    auto val = evaluate_policy(g, pol);
    bool changed = false;
    for (int u = 0; u < n; ++u) {
      Rational best = val[u];
      for (int i = 0; i < (int)g.succ[u].size(); ++i) {
        Rational c = g.succ[u][i].w + g.lambda * val[g.succ[u][i].dst];
        if (obj == Objective::Max ? c > best : c < best) {
          best = c;
          pol[u] = i;
          changed = true;
        }
      }
    }
    if (!changed) {
      if (policy_out) *policy_out = pol;
      return val;
    }
  }
}

std::vector<Rational> antagonistic_values(const GameGraph& g, std::vector<int>* eve_out, std::vector<int>* adam_out) {
  int n = g.size();
  std::vector<int> eve(n, 0);
  GameGraph h = g;
  while (true) {
    for (int u = 0; u < n; ++u)
      if (g.owner[u] == Player::Eve) h.succ[u] = {g.succ[u][eve[u]]};
    std::vector<int> adam;
    auto val = one_player_values(h, Objective::Min, &adam);
    bool changed = false;
    for (int u = 0; u < n; ++u) {
      if (g.owner[u] != Player::Eve) continue;
      Rational best = val[u];
      for (int i = 0; i < (int)g.succ[u].size(); ++i) {
        Rational c = g.succ[u][i].w + g.lambda * val[g.succ[u][i].dst];
        if (c > best) {
          best = c;
          eve[u] = i;
          changed = true;
        }
      }
    }
    if (!changed) {
      if (eve_out) *eve_out = eve;
      if (adam_out) {
        for (int u = 0; u < n; ++u)
          if (g.owner[u] == Player::Eve) adam[u] = eve[u];
        *adam_out = adam;
      }
      return val;
    }
  }
}

std::vector<Rational> coop_value(const WeightedArena& g) { return one_player_values(to_graph(g), Objective::Max); }
std::vector<Rational> min_value(const WeightedArena& g) { return one_player_values(to_graph(g), Objective::Min); }
std::vector<Rational> antag_value(const WeightedArena& g) { return antagonistic_values(to_graph(g)); }

ValueTable compute_values(const WeightedArena& g) {
  auto h = to_graph(g);
  return {antagonistic_values(h), one_player_values(h, Objective::Max)};
}

Rational coop_value_excluding(const WeightedArena& g, const ValueTable& vt, int u, int v) {
  bool any = false;
  Rational best;
  for (int e : g.out[u]) {
    int t = g.edges[e].dst;
    if (t == v) continue;
    Rational c = g.edges[e].w + g.lambda.value() * vt.cval[t];
    if (!any || c > best) best = c;
    any = true;
  }
  if (!any) throw std::invalid_argument("no edge out of " + g.names[u] + " other than to " + g.names[v]);
  return best;
}

CanonicalStrategies canonical_strategies(const WeightedArena& g, const ValueTable& vt) {
  const Rational& l = g.lambda.value();
  int n = g.size();
  CanonicalStrategies cs;
  cs.sigma_wc = cs.sigma_co = cs.sigma_cw = {Player::Eve, std::vector<int>(n, -1)};
  cs.tau_wc = {Player::Adam, std::vector<int>(n, -1)};
  cs.copt.assign(n, {});
  cs.wcopt.assign(n, {});
  for (int u = 0; u < n; ++u) {
    if (!g.is_eve(u)) {
      for (int e : g.out[u]) {
        int t = g.edges[e].dst;
        if (g.edges[e].w + l * vt.aval[t] == vt.aval[u]) {
          cs.tau_wc.choice[u] = t;
          break;
        }
      }
      continue;
    }
    for (int e : g.out[u]) {
      int t = g.edges[e].dst;
      if (g.edges[e].w + l * vt.cval[t] == vt.cval[u]) cs.copt[u].push_back(t);
      if (g.edges[e].w + l * vt.aval[t] == vt.aval[u]) cs.wcopt[u].push_back(t);
    }
    if (cs.copt[u].empty() || cs.wcopt[u].empty()) throw std::logic_error("value table violates Bellman equations");
    cs.sigma_co.choice[u] = cs.copt[u].front();
    cs.sigma_wc.choice[u] = cs.wcopt[u].front();
    int best = -1;
    Rational bv;
    for (int t : cs.wcopt[u]) {
      Rational c = g.edges[g.edge_index(u, t)].w + l * vt.cval[t];
      if (best < 0 || c > bv) best = t, bv = c;
    }
    cs.sigma_cw.choice[u] = best;
  }
  return cs;
}

Rational play_value(const WeightedArena& g, const PositionalStrategy& eve, const PositionalStrategy& adam, int from) {
  GameGraph h = to_graph(g);
  std::vector<int> pol(g.size(), 0);
  for (int u = 0; u < g.size(); ++u) {
    int t = g.is_eve(u) ? eve(u) : adam(u);
    for (int i = 0; i < (int)h.succ[u].size(); ++i)
      if (h.succ[u][i].dst == t) pol[u] = i;
  }
  return evaluate_policy(h, pol)[from];
}

}  // namespace regret
