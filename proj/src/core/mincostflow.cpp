#include "core/mincostflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "core/domain.hpp"

namespace ccecr {

namespace {
constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
}

MinCostFlow::MinCostFlow(int num_nodes) : graph_(num_nodes), excess_(num_nodes, 0) {}

int MinCostFlow::add_node() {
  graph_.emplace_back();
  excess_.push_back(0);
  return static_cast<int>(graph_.size()) - 1;
}

int MinCostFlow::add_arc(int from, int to, std::int64_t cap, std::int64_t cost) {
  if (cap < 0) throw Error("add_arc: negative capacity");
  Edge fwd{to, cap, cost, static_cast<int>(graph_[to].size())};
  Edge bwd{from, 0, -cost, static_cast<int>(graph_[from].size())};
  graph_[from].push_back(fwd);
  graph_[to].push_back(bwd);
  arc_ref_.push_back({from, static_cast<int>(graph_[from].size()) - 1});
  arc_cap_.push_back(cap);
  return static_cast<int>(arc_ref_.size()) - 1;
}

void MinCostFlow::add_excess(int node, std::int64_t amount) { excess_[node] += amount; }

MinCostFlow::Result MinCostFlow::solve() {
  const int s = add_node();
  const int t = add_node();
  std::int64_t total_supply = 0;
  for (int v = 0; v < s; ++v) {
    if (excess_[v] > 0) {
      add_arc(s, v, excess_[v], 0);
      total_supply += excess_[v];
    } else if (excess_[v] < 0) {
      add_arc(v, t, -excess_[v], 0);
    }
  }
  const int n = num_nodes();

  // Bellman-Ford once to make reduced costs non-negative (demand arcs carry
  // negative costs). The network is time-expanded, so this converges in few
  // passes over the insertion-ordered arc list.
  potential_.assign(n, kInf);
  potential_[s] = 0;
  for (int pass = 0; pass < n; ++pass) {
    bool changed = false;
    for (int u = 0; u < n; ++u) {
      if (potential_[u] >= kInf) continue;
      for (const Edge& e : graph_[u]) {
        if (e.cap > 0 && potential_[u] + e.cost < potential_[e.to]) {
          potential_[e.to] = potential_[u] + e.cost;
          changed = true;
        }
      }
    }
    if (!changed) break;
    if (pass == n - 1) throw Error("min-cost flow: negative cycle");
  }

  Result res;
  std::vector<std::int64_t> dist(n);
  std::vector<int> prev_node(n), prev_edge(n);
  using Item = std::pair<std::int64_t, int>;

  while (true) {
    std::fill(dist.begin(), dist.end(), kInf);
    dist[s] = 0;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    pq.push({0, s});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (int i = 0; i < static_cast<int>(graph_[u].size()); ++i) {
        const Edge& e = graph_[u][i];
        if (e.cap <= 0 || potential_[e.to] >= kInf) continue;
        std::int64_t nd = d + e.cost + potential_[u] - potential_[e.to];
        if (nd < dist[e.to]) {
          dist[e.to] = nd;
          prev_node[e.to] = u;
          prev_edge[e.to] = i;
          pq.push({nd, e.to});
        }
      }
    }
    if (dist[t] >= kInf) break;
    for (int v = 0; v < n; ++v) {
      if (dist[v] < kInf) potential_[v] += dist[v];
    }
    std::int64_t bottleneck = kInf;
    for (int v = t; v != s; v = prev_node[v]) {
      bottleneck = std::min(bottleneck, graph_[prev_node[v]][prev_edge[v]].cap);
    }
    for (int v = t; v != s; v = prev_node[v]) {
      Edge& e = graph_[prev_node[v]][prev_edge[v]];
      e.cap -= bottleneck;
      graph_[v][e.rev].cap += bottleneck;
      res.cost += bottleneck * e.cost;
    }
    res.routed += bottleneck;
  }

  res.feasible = res.routed == total_supply;
  return res;
}

std::int64_t MinCostFlow::flow(int arc_id) const {
  auto [u, i] = arc_ref_[arc_id];
  return arc_cap_[arc_id] - graph_[u][i].cap;
}

bool MinCostFlow::check_complementary_slackness() const {
  for (int u = 0; u < num_nodes(); ++u) {
    if (potential_[u] >= kInf) continue;
    for (const Edge& e : graph_[u]) {
      if (e.cap <= 0 || potential_[e.to] >= kInf) continue;
      if (e.cost + potential_[u] - potential_[e.to] < 0) return false;
    }
  }
  return true;
}

}  // namespace ccecr
