#include "core/policies.hpp"

#include <algorithm>
#include <cmath>

namespace ccecr {

std::vector<PortRoleInfo> classify_ports(const TopoIndex& idx, double theta_frac) {
  const Topology& t = idx.topo();
  const int np = idx.num_ports();
  std::vector<double> outbound(np, 0.0), inbound(np, 0.0);
  double total = 0.0;
  for (size_t k = 0; k < t.order_model.pairs.size(); ++k) {
    const auto& od = t.order_model.pairs[k];
    double mean = 0.0;
    for (int64_t day = 0; day < t.horizon; ++day) mean += order_mean(od, day);
    mean /= static_cast<double>(t.horizon);
    auto [o, d] = idx.pair_ports()[k];
    outbound[o] += mean;
    inbound[d] += mean;
    total += mean;
  }
  double theta = theta_frac * total / static_cast<double>(np);
  std::vector<PortRoleInfo> roles(np);
  for (int h = 0; h < np; ++h) {
    roles[h].net_outflow = outbound[h] - inbound[h];
    if (roles[h].net_outflow > theta)
      roles[h].role = PortRole::kExporting;
    else if (roles[h].net_outflow < -theta)
      roles[h].role = PortRole::kImporting;
  }
  return roles;
}

std::int64_t feasible_low(const Observation& o) {
  return -std::min({o.vessel_empties, o.port_capacity - o.port_stock, o.handling_cap});
}

std::int64_t feasible_high(const Observation& o) {
  return std::min({o.port_stock, o.vessel_free, o.handling_cap});
}

RepositionAction RandomPolicy::act(Simulator&, const DecisionPoint& d, Rng& rng) {
  return {rng.uniform_int(feasible_low(d.obs), feasible_high(d.obs))};
}

RepositionAction HeurPolicy::act(Simulator&, const DecisionPoint& d, Rng& rng) {
  const Observation& o = d.obs;
  switch (roles_[d.port].role) {
    case PortRole::kExporting: {
      // Exporting ports consume empties: drop at least half of what is aboard.
      int64_t e = std::min(o.vessel_empties, -feasible_low(o) /*room*/);
      if (o.vessel_empties <= 0) return {0};
      int64_t lo = (o.vessel_empties + 1) / 2;
      return {-std::min(e, rng.uniform_int(lo, o.vessel_empties))};
    }
    case PortRole::kImporting: {
      int64_t m = feasible_high(o);
      if (m <= 0) return {0};
      return {rng.uniform_int((m + 1) / 2, m)};
    }
    case PortRole::kBalanced:
      return {0};
  }
  return {0};
}

void PlanExecutor::install(Plan plan) {
  plan_ = std::move(plan);
  next_ordinal_.assign(plan_.moves.size(), 0);
  divergences_ = 0;
}

void PlanExecutor::begin_episode(Simulator& sim) {
  next_ordinal_.assign(sim.index().num_vessels(), 0);
  divergences_ = 0;
}

RepositionAction PlanExecutor::act(Simulator&, const DecisionPoint& d, Rng&) {
  if (static_cast<size_t>(d.vessel) >= plan_.moves.size()) return {0};
  size_t ord = static_cast<size_t>(next_ordinal_[d.vessel]++);
  const auto& mv = plan_.moves[d.vessel];
  return {ord < mv.size() ? mv[ord] : 0};
}

void PlanExecutor::on_applied(const DecisionPoint&, std::int64_t requested, std::int64_t applied) {
  if (requested != applied) divergences_++;
}

}  // namespace ccecr
