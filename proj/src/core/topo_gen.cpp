#include "core/topo_gen.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "core/rng.hpp"

namespace ccecr {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string numbered_id(const char* prefix, int n) {
  std::string s = std::to_string(n);
  if (s.size() < 2) s.insert(s.begin(), '0');
  return prefix + s;
}

Port make_port(std::string id, std::int64_t cap, std::int64_t init) {
  Port p;
  p.id = std::move(id);
  p.capacity = cap;
  p.initial_stock = init;
  return p;
}

OrderPair make_pair(std::string o, std::string d, double base, double cv,
                    std::vector<DemandPeriod> periods = {}) {
  OrderPair op;
  op.origin = std::move(o);
  op.destination = std::move(d);
  op.base_volume = base;
  op.noise_cv = cv;
  op.periods = std::move(periods);
  return op;
}

// Cumulative nominal legs from stop position a to stop position b, walking
// the cycle forward.
std::int64_t route_sail(const Route& r, int a, int b) {
  double days = 0.0;
  int pos = a;
  while (pos != b) {
    days += r.leg_distances[pos];
    pos = (pos + 1) % static_cast<int>(r.stops.size());
  }
  return std::max<std::int64_t>(1, std::llround(std::ceil(days)));
}

}  // namespace

Topology desk_topology() {
  // The two routes share the D2-D3 middle, where most demand lives, so any
  // fleet split can serve the bulk of it and no configuration is
  // catastrophic; the exclusive pole ports D1 and D4 give the split a mild,
  // smooth effect. Vessel space is tight against laden plus the empty
  // backhaul (middle ports accumulate, poles drain), so undisciplined empty
  // loading crowds out paying cargo: repositioning skill separates policies
  // far more than the fleet split does.
  Topology t;
  t.ports = {
      make_port("D1", 30, 8),
      make_port("D2", 30, 14),
      make_port("D3", 24, 10),
      make_port("D4", 20, 6),
  };
  t.routes = {
      {"R1", {"D1", "D2", "D3"}, {2.0, 2.0, 2.0}},
      {"R2", {"D2", "D4", "D3"}, {2.0, 2.0, 2.0}},
  };
  // Speed noise is wide enough that whole-day slippage on the short legs is
  // routine. A narrower sigma would round every travel time back to the
  // nominal two days, so the vessels' relative start phases would persist for
  // the whole horizon and a split's value would hinge on arbitrary start-port
  // alignment instead of on the split itself.
  t.vessels = {
      {"V1", 11, {0.45}},
      {"V2", 11, {0.45}},
      {"V3", 9, {0.45}},
  };
  t.order_model.pairs = {
      make_pair("D1", "D2", 1.4, 0.45, {{0.4, 14.0, 0.0}}),
      make_pair("D2", "D3", 2.6, 0.45, {{0.3, 21.0, 1.0}}),
      make_pair("D3", "D1", 0.9, 0.45, {{0.4, 14.0, kPi}}),
      make_pair("D3", "D2", 1.2, 0.45),
      make_pair("D2", "D4", 0.35, 0.40, {{0.2, 28.0, 0.5}}),
      make_pair("D4", "D2", 0.70, 0.40),
  };
  t.order_model.sail_days = {
      {"D1", "D2", 2}, {"D2", "D3", 2}, {"D3", "D1", 2},
      {"D3", "D2", 2}, {"D2", "D4", 2}, {"D4", "D2", 4},
  };
  t.empty_return_delay = 2;
  t.horizon = 90;
  return t;
}

Topology planted_topology() {
  // Demand exceeds the full fleet's throughput and the yards absorb any
  // arrival burst, so fulfillment rises strictly with every vessel moved to
  // route A. Zero speed noise keeps the realized world identical across
  // configurations under one seed: evaluation ranks configurations exactly.
  Topology t;
  t.ports = {
      make_port("PA1", 80, 40),
      make_port("PA2", 80, 40),
      make_port("PB1", 40, 6),
      make_port("PB2", 40, 6),
  };
  t.routes = {
      {"RA", {"PA1", "PA2"}, {2.0, 2.0}},
      {"RB", {"PB1", "PB2"}, {2.0, 2.0}},
  };
  t.vessels = {
      {"W1", 8, {0.0}},
      {"W2", 8, {0.0}},
      {"W3", 8, {0.0}},
      {"W4", 8, {0.0}},
  };
  t.order_model.pairs = {
      make_pair("PA1", "PA2", 8.0, 0.05, {{0.2, 10.0, 0.0}}),
      make_pair("PA2", "PA1", 8.0, 0.05),
  };
  t.order_model.sail_days = {{"PA1", "PA2", 2}, {"PA2", "PA1", 2}};
  t.empty_return_delay = 1;
  t.horizon = 30;
  return t;
}

Topology wwt_shaped_topology(int variant, std::uint64_t seed) {
  if (variant != 1 && variant != 2) throw Error("wwt_shaped_topology: variant must be 1 or 2");
  const int num_ports = 22;
  const int num_routes = variant == 1 ? 13 : 6;
  const int num_vessels = 46;
  const std::int64_t horizon = variant == 1 ? 400 : 200;

  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(variant)));
  Topology t;
  t.horizon = horizon;
  t.empty_return_delay = 2;

  for (int i = 0; i < num_ports; ++i) {
    const std::int64_t cap = rng.uniform_int(600, 1200);
    const std::int64_t init = rng.uniform_int(cap / 4, (3 * cap) / 4);
    t.ports.push_back(make_port(numbered_id("P", i + 1), cap, init));
  }

  // Every port lands on at least one route; routes then pad with extra
  // distinct ports so each has >= 3 stops.
  std::vector<int> order(num_ports);
  for (int i = 0; i < num_ports; ++i) order[i] = i;
  for (int i = num_ports - 1; i > 0; --i) {
    std::swap(order[i], order[rng.uniform_int(0, i)]);
  }
  std::vector<std::vector<int>> members(num_routes);
  for (int i = 0; i < num_ports; ++i) members[i % num_routes].push_back(order[i]);
  for (int r = 0; r < num_routes; ++r) {
    const int want = static_cast<int>(rng.uniform_int(3, 5));
    std::set<int> have(members[r].begin(), members[r].end());
    while (static_cast<int>(members[r].size()) < want) {
      const int cand = static_cast<int>(rng.uniform_int(0, num_ports - 1));
      if (have.insert(cand).second) members[r].push_back(cand);
    }
    for (int i = static_cast<int>(members[r].size()) - 1; i > 0; --i) {
      std::swap(members[r][i], members[r][rng.uniform_int(0, i)]);
    }
    Route route;
    route.id = numbered_id("R", r + 1);
    for (int h : members[r]) route.stops.push_back(t.ports[h].id);
    for (size_t k = 0; k < members[r].size(); ++k) {
      route.leg_distances.push_back(rng.uniform(1.5, 5.0));
    }
    t.routes.push_back(std::move(route));
  }

  for (int v = 0; v < num_vessels; ++v) {
    VesselSpec spec;
    spec.id = numbered_id("V", v + 1);
    spec.capacity = rng.uniform_int(200, 500);
    spec.speed_noise.sigma = 0.10;
    t.vessels.push_back(spec);
  }

  // Demand: a few ordered pairs per route (sail times from the route legs),
  // plus cross-route pairs with looser sail estimates.
  std::set<std::pair<std::string, std::string>> used;
  auto add_demand = [&](const std::string& o, const std::string& d, std::int64_t sail) {
    if (o == d || !used.insert({o, d}).second) return;
    std::vector<DemandPeriod> periods;
    const int nper = static_cast<int>(rng.uniform_int(1, 2));
    for (int k = 0; k < nper; ++k) {
      periods.push_back({rng.uniform(0.1, 0.4), static_cast<double>(rng.uniform_int(20, 90)),
                         rng.uniform(0.0, 2 * kPi)});
    }
    t.order_model.pairs.push_back(make_pair(o, d, rng.uniform(3.0, 20.0),
                                            rng.uniform(0.10, 0.40), std::move(periods)));
    t.order_model.sail_days.push_back({o, d, sail});
  };
  for (const Route& r : t.routes) {
    const int n = static_cast<int>(r.stops.size());
    const int wanted = static_cast<int>(rng.uniform_int(2, 3));
    for (int k = 0; k < wanted; ++k) {
      const int a = static_cast<int>(rng.uniform_int(0, n - 1));
      int b = static_cast<int>(rng.uniform_int(0, n - 1));
      if (a == b) b = (b + 1) % n;
      add_demand(r.stops[a], r.stops[b], route_sail(r, a, b));
    }
  }
  const int cross = variant == 1 ? 8 : 6;
  for (int k = 0; k < cross; ++k) {
    const int a = static_cast<int>(rng.uniform_int(0, num_ports - 1));
    int b = static_cast<int>(rng.uniform_int(0, num_ports - 1));
    if (a == b) b = (b + 1) % num_ports;
    add_demand(t.ports[a].id, t.ports[b].id, rng.uniform_int(4, 10));
  }

  return t;
}

}  // namespace ccecr
