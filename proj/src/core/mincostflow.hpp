#ifndef CCECR_CORE_MINCOSTFLOW_HPP
#define CCECR_CORE_MINCOSTFLOW_HPP

#include <cstdint>
#include <vector>

namespace ccecr {

// Integer min-cost flow, successive shortest augmenting paths with node
// potentials. Negative arc costs are allowed (one Bellman-Ford pass seeds the
// potentials, Dijkstra on reduced costs afterwards). All flows are integral.
class MinCostFlow {
 public:
  explicit MinCostFlow(int num_nodes);

  int add_node();
  // Returns an arc id for flow(). cap >= 0.
  int add_arc(int from, int to, std::int64_t cap, std::int64_t cost);
  // Positive excess = supply, negative = demand. Accumulates. Overall sum
  // must be zero for a fully routable instance.
  void add_excess(int node, std::int64_t amount);

  struct Result {
    bool feasible = false;
    std::int64_t cost = 0;
    std::int64_t routed = 0;  // total supply routed
  };
  // Routes all excess. Feasible iff every unit of supply reaches demand.
  Result solve();

  std::int64_t flow(int arc_id) const;
  // Node potentials at optimality; reduced cost of every residual arc is
  // non-negative (complementary slackness witness).
  const std::vector<std::int64_t>& potentials() const { return potential_; }
  bool check_complementary_slackness() const;

  int num_nodes() const { return static_cast<int>(graph_.size()); }
  int num_arcs() const { return static_cast<int>(arc_ref_.size()); }

 private:
  struct Edge {
    int to;
    std::int64_t cap;  // residual capacity
    std::int64_t cost;
    int rev;  // index of the reverse edge in graph_[to]
  };

  std::vector<std::vector<Edge>> graph_;
  std::vector<std::int64_t> excess_;
  std::vector<std::pair<int, int>> arc_ref_;  // arc id -> (node, edge index)
  std::vector<std::int64_t> arc_cap_;
  std::vector<std::int64_t> potential_;
};

}  // namespace ccecr

#endif  // CCECR_CORE_MINCOSTFLOW_HPP
