#include "core/planner.hpp"

#include <algorithm>
#include <cmath>

namespace ccecr {

Forecast make_forecast(const TopoIndex& idx, const PlanningSnapshot& snap, std::int64_t plan_len,
                       double noise_level, Rng& rng) {
  const Topology& t = idx.topo();
  Forecast f;
  f.from_day = snap.day;
  f.window_end = std::min(snap.day + plan_len, t.horizon);
  f.mid_day = snap.mid_day;
  f.noise_level = noise_level;
  const std::int64_t days = std::max<std::int64_t>(0, f.window_end - f.from_day);

  const auto& pairs = t.order_model.pairs;
  f.demand.assign(pairs.size(), std::vector<std::int64_t>(days, 0));
  for (size_t k = 0; k < pairs.size(); ++k) {
    for (std::int64_t r = 0; r < days; ++r) {
      double eps = noise_level > 0.0 ? rng.uniform(-noise_level, noise_level) : 0.0;
      f.demand[k][r] = std::max<std::int64_t>(
          0, std::llround(order_mean(pairs[k], f.from_day + r) * (1.0 + eps)));
    }
  }

  f.calls.resize(snap.vessels.size());
  for (size_t v = 0; v < snap.vessels.size(); ++v) {
    const VesselSnapshot& vs = snap.vessels[v];
    const Route& route = t.routes[vs.route];
    int pos = vs.next_stop_pos;
    std::int64_t day = vs.next_arrival_day;
    while (day < f.window_end) {
      f.calls[v].push_back({idx.route_stops(vs.route)[pos], day});
      double eps = noise_level > 0.0 ? rng.uniform(-noise_level, noise_level) : 0.0;
      day += std::max<std::int64_t>(1, std::llround(route.leg_distances[pos] * (1.0 + eps)));
      pos = (pos + 1) % static_cast<int>(route.stops.size());
    }
  }
  return f;
}

namespace {

// Greedy laden itinerary mirror: walks the forecast schedule loading waiting
// laden (destination index order, vessel space permitting) and discharging at
// destinations. Produces per-leg laden occupancy and, for containers that
// already exist in the snapshot (aboard or waiting at origins), the pool
// entries their discharge will create. Forecast-demand laden contributes
// occupancy only; its container flow is carried by the demand arcs.
struct LadenWalk {
  std::vector<std::vector<std::int64_t>> occupancy;  // [vessel][ordinal], after pickup
  struct PoolSupply {
    int port;
    std::int64_t entry_day;  // day the containers join the maturity pool pass
    std::int64_t qty;
  };
  std::vector<PoolSupply> warm_pool;
};

LadenWalk walk_laden(const TopoIndex& idx, const Forecast& f, const PlanningSnapshot& snap) {
  const Topology& t = idx.topo();
  const int np = idx.num_ports();
  const int nv = static_cast<int>(snap.vessels.size());
  LadenWalk out;
  out.occupancy.resize(nv);
  for (int v = 0; v < nv; ++v) out.occupancy[v].assign(f.calls[v].size(), 0);

  auto warm_wait = snap.waiting_laden;
  std::vector<std::vector<std::int64_t>> fc_wait(np, std::vector<std::int64_t>(np, 0));
  std::vector<std::vector<std::int64_t>> warm_aboard(nv), fc_aboard(nv);
  std::vector<std::int64_t> aboard_total(nv, 0);
  for (int v = 0; v < nv; ++v) {
    warm_aboard[v] = snap.vessels[v].laden_by_dest;
    fc_aboard[v].assign(np, 0);
    for (int h = 0; h < np; ++h) aboard_total[v] += warm_aboard[v][h];
  }

  // (day, port, vessel)-ordered call feed, same order the simulator uses.
  struct Ev {
    std::int64_t day;
    int port;
    int vessel;
    int ordinal;
  };
  std::vector<Ev> events;
  for (int v = 0; v < nv; ++v) {
    for (size_t j = 0; j < f.calls[v].size(); ++j) {
      events.push_back({f.calls[v][j].day, f.calls[v][j].port, v, static_cast<int>(j)});
    }
  }
  std::sort(events.begin(), events.end(), [](const Ev& a, const Ev& b) {
    if (a.day != b.day) return a.day < b.day;
    if (a.port != b.port) return a.port < b.port;
    return a.vessel < b.vessel;
  });

  size_t cursor = 0;
  for (std::int64_t day = f.from_day; day < f.window_end; ++day) {
    if (!(f.mid_day && day == f.from_day)) {
      // Forecast demand becomes waiting laden the day it is (assumed) served.
      for (size_t k = 0; k < t.order_model.pairs.size(); ++k) {
        auto [o, d] = idx.pair_ports()[k];
        fc_wait[o][d] += f.demand[k][day - f.from_day];
      }
    }
    for (; cursor < events.size() && events[cursor].day == day; ++cursor) {
      const Ev& ev = events[cursor];
      const std::int64_t cap_v = t.vessels[ev.vessel].capacity;
      // Discharge first: warm laden lands in the pool, forecast laden just
      // frees space (its container path is a demand arc).
      if (warm_aboard[ev.vessel][ev.port] > 0) {
        out.warm_pool.push_back({ev.port,
                                 std::max(day + t.empty_return_delay, day + 1),
                                 warm_aboard[ev.vessel][ev.port]});
        aboard_total[ev.vessel] -= warm_aboard[ev.vessel][ev.port];
        warm_aboard[ev.vessel][ev.port] = 0;
      }
      aboard_total[ev.vessel] -= fc_aboard[ev.vessel][ev.port];
      fc_aboard[ev.vessel][ev.port] = 0;

      int route = snap.vessels[ev.vessel].route;
      for (int d = 0; d < np; ++d) {
        if (d == ev.port || !idx.route_contains(route, d)) continue;
        std::int64_t space = cap_v - aboard_total[ev.vessel];
        if (space <= 0) break;
        std::int64_t take = std::min(warm_wait[ev.port][d], space);
        if (take > 0) {
          warm_wait[ev.port][d] -= take;
          warm_aboard[ev.vessel][d] += take;
          aboard_total[ev.vessel] += take;
          space -= take;
        }
        take = std::min(fc_wait[ev.port][d], space);
        if (take > 0) {
          fc_wait[ev.port][d] -= take;
          fc_aboard[ev.vessel][d] += take;
          aboard_total[ev.vessel] += take;
        }
      }
      out.occupancy[ev.vessel][ev.ordinal] = aboard_total[ev.vessel];
    }
  }

  // Vessels carrying empties at plan time must be able to keep them aboard:
  // cap the occupancy estimate so every leg leaves room for them.
  for (int v = 0; v < nv; ++v) {
    std::int64_t e0 = snap.vessels[v].empties;
    if (e0 <= 0) continue;
    std::int64_t ceil = std::max<std::int64_t>(0, t.vessels[v].capacity - e0);
    for (auto& o : out.occupancy[v]) o = std::min(o, ceil);
  }
  return out;
}

}  // namespace

BuiltNetwork build_flow_network(const TopoIndex& idx, const Forecast& f,
                                const PlanningSnapshot& snap) {
  const Topology& t = idx.topo();
  const int np = idx.num_ports();
  const int nv = static_cast<int>(snap.vessels.size());
  const std::int64_t T0 = f.from_day;
  const std::int64_t D = std::max<std::int64_t>(0, f.window_end - T0);
  const std::int64_t first_serving = f.mid_day ? 1 : 0;
  constexpr std::int64_t kInfCap = (std::int64_t{1} << 50);

  BuiltNetwork net;
  MinCostFlow& g = net.flow;
  net.sink = g.add_node();

  // Per-(port, rel day) nodes. pre serves that day's demand; m gathers the
  // carried-over stock and maturing pool entries; the arc m -> chain start
  // carries the port capacity bound that holds after maturation.
  auto idx2 = [&](std::int64_t r, int h) { return static_cast<size_t>(r) * np + h; };
  std::vector<int> pre(idx2(D, 0), -1), m(idx2(D, 0), -1), pool(idx2(D, 0), -1);
  for (std::int64_t r = 0; r < D; ++r) {
    for (int h = 0; h < np; ++h) {
      if (r >= first_serving) {
        pre[idx2(r, h)] = g.add_node();
        pool[idx2(r, h)] = g.add_node();
      } else if (!f.mid_day) {
        pool[idx2(r, h)] = g.add_node();
      }
      m[idx2(r, h)] = g.add_node();
    }
  }
  // Fresh windows have pool nodes from day 0; mid-day ones from day 1 only.
  // (The day-0 maturation pass already ran when a mid-day snapshot is taken.)

  std::vector<std::vector<int>> call_node(nv);
  for (int v = 0; v < nv; ++v) {
    call_node[v].resize(f.calls[v].size());
    for (size_t j = 0; j < f.calls[v].size(); ++j) call_node[v][j] = g.add_node();
  }

  // Calls grouped per (port, rel day), vessel order, for the intra-day chain.
  std::vector<std::vector<std::pair<int, int>>> by_port_day(idx2(D, 0));
  for (int v = 0; v < nv; ++v) {
    for (size_t j = 0; j < f.calls[v].size(); ++j) {
      by_port_day[idx2(f.calls[v][j].day - T0, f.calls[v][j].port)].push_back(
          {v, static_cast<int>(j)});
    }
  }

  LadenWalk laden = walk_laden(idx, f, snap);

  std::int64_t total_supply = 0;
  auto supply = [&](int node, std::int64_t qty) {
    if (qty <= 0) return;
    g.add_excess(node, qty);
    total_supply += qty;
  };

  // Stock plumbing day by day.
  for (std::int64_t r = 0; r < D; ++r) {
    for (int h = 0; h < np; ++h) {
      const std::int64_t cap_h = t.ports[h].capacity;
      const std::int64_t hcap = idx.handling_cap(h);
      if (pre[idx2(r, h)] >= 0) g.add_arc(pre[idx2(r, h)], m[idx2(r, h)], kInfCap, 0);
      if (pool[idx2(r, h)] >= 0) {
        g.add_arc(pool[idx2(r, h)], m[idx2(r, h)], kInfCap, 0);
        bool last = r + 1 >= D;
        g.add_arc(pool[idx2(r, h)], last ? net.sink : pool[idx2(r + 1, h)], kInfCap,
                  last ? 0 : BuiltNetwork::kDeferCost);
      }
      int prev = g.add_node();  // chain start: stock after maturation
      g.add_arc(m[idx2(r, h)], prev, cap_h, 0);
      if (r == 0 && f.mid_day) supply(prev, snap.stock[h]);
      for (auto [v, j] : by_port_day[idx2(r, h)]) {
        int cn = call_node[v][j];
        std::int64_t move_cap = std::min(t.vessels[v].capacity, hcap);
        int s_in = g.add_node();
        int s_out = g.add_node();
        net.call_arcs.push_back(
            {v, j, g.add_arc(prev, cn, move_cap, BuiltNetwork::kMoveCost),
             g.add_arc(cn, s_in, move_cap, BuiltNetwork::kMoveCost)});
        g.add_arc(prev, s_in, cap_h, 0);
        // Stock right after this call's action must fit the yard; this is
        // the clamp the simulator applies to discharges.
        g.add_arc(s_in, s_out, cap_h, 0);
        prev = s_out;
      }
      bool last = r + 1 >= D;
      g.add_arc(prev, last ? net.sink : pre[idx2(r + 1, h)], last ? kInfCap : cap_h, 0);
    }
  }

  // Vessel legs and terminal drains.
  for (int v = 0; v < nv; ++v) {
    const std::int64_t cap_v = t.vessels[v].capacity;
    for (size_t j = 0; j < f.calls[v].size(); ++j) {
      if (j + 1 < f.calls[v].size()) {
        std::int64_t leg_cap = std::max<std::int64_t>(0, cap_v - laden.occupancy[v][j]);
        g.add_arc(call_node[v][j], call_node[v][j + 1], leg_cap, BuiltNetwork::kLegCost);
      } else {
        g.add_arc(call_node[v][j], net.sink, kInfCap, 0);
      }
    }
  }

  // Demand arcs: serve at the origin, return matured at the destination after
  // sail + return delay (never earlier than the day after discharge).
  // Pairs the deployed fleet cannot carry get no serving arc: the simulator
  // refuses those bookings, so the plan must not count them either.
  std::vector<int> vessel_routes(snap.vessels.size());
  for (size_t v = 0; v < snap.vessels.size(); ++v) vessel_routes[v] = snap.vessels[v].route;
  const std::vector<char> servable = servable_pairs(idx, vessel_routes);
  for (std::int64_t r = first_serving; r < D; ++r) {
    for (size_t k = 0; k < t.order_model.pairs.size(); ++k) {
      std::int64_t q = f.demand[k][r];
      net.planned_demand += q;
      if (q <= 0 || !servable[k]) continue;
      auto [o, d] = idx.pair_ports()[k];
      std::int64_t sail = idx.sail_days(o, d);
      std::int64_t entry = (T0 + r) + sail + std::max<std::int64_t>(t.empty_return_delay, 1);
      int target = entry - T0 < D ? pool[idx2(entry - T0, d)] : net.sink;
      std::int64_t cost = -BuiltNetwork::kServeReward + BuiltNetwork::kServeDayTiebreak * r;
      net.demand_arcs.push_back({static_cast<int>(k), r, g.add_arc(pre[idx2(r, o)], target, q, cost)});
    }
  }

  // Supplies: port stock (fresh windows start the day, mid-day ones join the
  // chain above), pool entries, vessel empties at their first planned call,
  // and warm laden discharges from the itinerary walk.
  if (!f.mid_day && D > 0) {
    for (int h = 0; h < np; ++h) supply(pre[idx2(0, h)], snap.stock[h]);
  }
  for (const auto& e : snap.pool) {
    std::int64_t entry = e.mature_day;
    if (f.mid_day) entry = std::max(entry, T0 + 1);
    std::int64_t r = std::max(entry, T0) - T0;
    if (r < D && pool[idx2(r, e.port)] >= 0) supply(pool[idx2(r, e.port)], e.qty);
  }
  for (const auto& w : laden.warm_pool) {
    std::int64_t r = w.entry_day - T0;
    if (r >= 0 && r < D && pool[idx2(r, w.port)] >= 0) supply(pool[idx2(r, w.port)], w.qty);
  }
  for (int v = 0; v < nv; ++v) {
    if (!f.calls[v].empty()) supply(call_node[v][0], snap.vessels[v].empties);
  }
  g.add_excess(net.sink, -total_supply);

  net.num_nodes = g.num_nodes();
  net.num_arcs = g.num_arcs();
  return net;
}

Plan solve_plan(const TopoIndex& idx, const Forecast& f, const PlanningSnapshot& snap) {
  BuiltNetwork net = build_flow_network(idx, f, snap);
  auto res = net.flow.solve();
  if (!res.feasible) throw Error("planner: flow network could not route its supplies");

  Plan plan;
  plan.epoch_day = f.from_day;
  plan.window_end = f.window_end;
  plan.planned_demand = net.planned_demand;
  plan.moves.resize(f.calls.size());
  for (size_t v = 0; v < f.calls.size(); ++v) plan.moves[v].assign(f.calls[v].size(), 0);
  for (const auto& ca : net.call_arcs) {
    plan.moves[ca.vessel][ca.ordinal] =
        net.flow.flow(ca.load_arc) - net.flow.flow(ca.discharge_arc);
  }
  for (const auto& da : net.demand_arcs) plan.planned_served += net.flow.flow(da.arc);
  plan.planned_shortage = plan.planned_demand - plan.planned_served;
  return plan;
}

PlanningSnapshot fresh_snapshot(const TopoIndex& idx, const FleetConfiguration& p) {
  Simulator sim(idx, p, 0);
  return sim.snapshot();
}

std::int64_t plan_objective(const TopoIndex& idx, const FleetConfiguration& p,
                            std::uint64_t forecast_seed, double noise_level) {
  Rng rng(forecast_seed);
  PlanningSnapshot snap = fresh_snapshot(idx, p);
  Forecast f = make_forecast(idx, snap, idx.topo().horizon, noise_level, rng);
  return solve_plan(idx, f, snap).planned_served;
}

void OrPolicy::begin_episode(Simulator& sim) {
  PlanningSnapshot snap = sim.snapshot();
  Forecast f = make_forecast(sim.index(), snap, sim.index().topo().horizon, noise_level_, rng_);
  install(solve_plan(sim.index(), f, snap));
}

void OriPolicy::begin_episode(Simulator& sim) {
  PlanningSnapshot snap = sim.snapshot();
  Forecast f = make_forecast(sim.index(), snap, plan_l_, noise_level_, rng_);
  install(solve_plan(sim.index(), f, snap));
  plans_made_ = 1;
}

RepositionAction OriPolicy::act(Simulator& sim, const DecisionPoint& d, Rng& rng) {
  if (d.day >= plan_.epoch_day + window_w_) {
    PlanningSnapshot snap = sim.snapshot();
    Forecast f = make_forecast(sim.index(), snap, plan_l_, noise_level_, rng_);
    install(solve_plan(sim.index(), f, snap));
    plans_made_++;
  }
  return PlanExecutor::act(sim, d, rng);
}

}  // namespace ccecr
