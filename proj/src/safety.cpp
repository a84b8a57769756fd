#include "regret/safety.hpp"

#include <deque>

namespace regret {

SafetyGame safety_game(const WeightedArena& g, const std::set<std::pair<int, int>>& bad) {
  SafetyGame s;
  s.owner = g.owner;
  s.init = g.init;
  s.succ.resize(g.size());
  s.bad.resize(g.size());
  for (int u = 0; u < g.size(); ++u)
    for (int e : g.out[u]) {
      s.succ[u].push_back(g.edges[e].dst);
      s.bad[u].push_back(bad.count({u, g.edges[e].dst}) > 0);
    }
  return s;
}

// Backward attractor.  Bad arcs behave like arcs into a losing sink, so a
// vertex enters at layer 0 when Adam owns a bad arc or Eve has nothing else.
SafetyResult solve_safety(const SafetyGame& game) {
  int n = game.size();
  SafetyResult r;
  r.adam_wins.assign(n, false);
  r.rank.assign(n, -1);
  r.eve_strategy.assign(n, 0);
  r.adam_strategy.assign(n, 0);
  std::vector<std::vector<std::pair<int, int>>> pred(n);  // (source, arc index)
  std::vector<int> count(n, 0);
  std::deque<int> queue;
  auto lose = [&](int u, int rank, int arc) {
    r.adam_wins[u] = true;
    r.rank[u] = rank;
    if (game.owner[u] == Player::Adam) r.adam_strategy[u] = arc;
    queue.push_back(u);
  };
  for (int u = 0; u < n; ++u) {
    int bad_arc = -1;
    for (int i = 0; i < (int)game.succ[u].size(); ++i) {
      if (game.bad[u][i]) {
        if (bad_arc < 0) bad_arc = i;
      } else {
        pred[game.succ[u][i]].push_back({u, i});
        ++count[u];
      }
    }
    if (game.owner[u] == Player::Adam ? bad_arc >= 0 : count[u] == 0) lose(u, 0, bad_arc);
  }
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (auto [p, i] : pred[x]) {
      if (r.adam_wins[p]) continue;
      if (game.owner[p] == Player::Adam || --count[p] == 0) lose(p, r.rank[x] + 1, i);
    }
  }
  for (int u = 0; u < n; ++u) {
    if (game.owner[u] != Player::Eve || r.adam_wins[u]) continue;
    for (int i = 0; i < (int)game.succ[u].size(); ++i)
      if (!game.bad[u][i] && !r.adam_wins[game.succ[u][i]]) {
        r.eve_strategy[u] = i;
        break;
      }
  }
  r.winner = r.adam_wins[game.init] ? Player::Adam : Player::Eve;
  return r;
}

}  // namespace regret
