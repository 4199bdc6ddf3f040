#include "core/domain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace ccecr {

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& issue : issues) {
    out << (issue.severity == Severity::kError ? "error: " : "warning: ") << issue.message << "\n";
  }
  return out.str();
}

namespace {

template <typename T>
std::vector<std::string> duplicate_ids(const std::vector<T>& items) {
  std::map<std::string, int> counts;
  for (const auto& item : items) counts[item.id]++;
  std::vector<std::string> dups;
  for (const auto& [id, n] : counts) {
    if (n > 1) dups.push_back(id);
  }
  return dups;
}

}  // namespace

ValidationReport validate_topology(const Topology& t) {
  ValidationReport rep;

  if (t.ports.empty()) rep.add_error("topology has no ports");
  if (t.horizon < 1) rep.add_error("horizon must be at least 1 day");
  if (t.empty_return_delay < 0) rep.add_error("empty_return_delay must be non-negative");

  for (const auto& id : duplicate_ids(t.ports)) rep.add_error("duplicate port id: " + id);
  for (const auto& id : duplicate_ids(t.routes)) rep.add_error("duplicate route id: " + id);
  for (const auto& id : duplicate_ids(t.vessels)) rep.add_error("duplicate vessel id: " + id);

  std::set<std::string> port_ids;
  for (const auto& p : t.ports) {
    port_ids.insert(p.id);
    if (p.id.empty()) rep.add_error("port with empty id");
    if (p.capacity < 0) rep.add_error("port " + p.id + ": negative capacity");
    if (p.initial_stock < 0) rep.add_error("port " + p.id + ": negative initial stock");
    if (p.initial_stock > p.capacity)
      rep.add_error("port " + p.id + ": initial stock exceeds capacity");
    if (p.handling_cap && *p.handling_cap < 0)
      rep.add_error("port " + p.id + ": negative handling cap");
  }

  for (const auto& r : t.routes) {
    if (r.id.empty()) rep.add_error("route with empty id");
    if (r.stops.size() < 2) {
      rep.add_error("route " + r.id + ": needs at least 2 stops");
      continue;
    }
    std::set<std::string> seen;
    for (const auto& s : r.stops) {
      if (!port_ids.count(s)) rep.add_error("route " + r.id + ": unknown port " + s);
      if (!seen.insert(s).second) rep.add_error("route " + r.id + ": port " + s + " visited twice");
    }
    if (r.leg_distances.size() != r.stops.size()) {
      rep.add_error("route " + r.id + ": leg count " + std::to_string(r.leg_distances.size()) +
                    " != stop count " + std::to_string(r.stops.size()));
    }
    for (double d : r.leg_distances) {
      if (!(d > 0.0)) rep.add_error("route " + r.id + ": non-positive leg distance");
    }
  }

  for (const auto& v : t.vessels) {
    if (v.id.empty()) rep.add_error("vessel with empty id");
    if (v.capacity < 1) rep.add_error("vessel " + v.id + ": capacity must be positive");
    if (v.speed_noise.sigma < 0.0 || v.speed_noise.sigma >= 1.0)
      rep.add_error("vessel " + v.id + ": speed noise sigma must be in [0, 1)");
  }

  std::set<std::pair<std::string, std::string>> pair_keys;
  for (const auto& od : t.order_model.pairs) {
    if (!port_ids.count(od.origin))
      rep.add_error("order pair: unknown origin " + od.origin);
    if (!port_ids.count(od.destination))
      rep.add_error("order pair: unknown destination " + od.destination);
    if (od.origin == od.destination)
      rep.add_error("order pair " + od.origin + ": origin equals destination");
    if (od.base_volume < 0.0)
      rep.add_error("order pair " + od.origin + "->" + od.destination + ": negative base volume");
    if (od.noise_cv < 0.0)
      rep.add_error("order pair " + od.origin + "->" + od.destination + ": negative noise cv");
    for (const auto& per : od.periods) {
      if (!(per.period_days > 0.0))
        rep.add_error("order pair " + od.origin + "->" + od.destination +
                      ": non-positive period");
    }
    if (!pair_keys.insert({od.origin, od.destination}).second)
      rep.add_error("order pair " + od.origin + "->" + od.destination + ": duplicated");
  }

  std::set<std::pair<std::string, std::string>> sail_keys;
  for (const auto& e : t.order_model.sail_days) {
    if (!port_ids.count(e.origin)) rep.add_error("sail_days: unknown origin " + e.origin);
    if (!port_ids.count(e.destination))
      rep.add_error("sail_days: unknown destination " + e.destination);
    if (e.days < 1) rep.add_error("sail_days " + e.origin + "->" + e.destination + ": days < 1");
    if (!sail_keys.insert({e.origin, e.destination}).second)
      rep.add_error("sail_days " + e.origin + "->" + e.destination + ": duplicated");
  }
  for (const auto& od : t.order_model.pairs) {
    if (!sail_keys.count({od.origin, od.destination}) && port_ids.count(od.origin) &&
        port_ids.count(od.destination)) {
      rep.add_warning("order pair " + od.origin + "->" + od.destination +
                      " has no sail_days entry, defaulting to 1 day");
    }
  }

  return rep;
}

ValidationReport validate_configuration(const Topology& t, const FleetConfiguration& p) {
  ValidationReport rep = validate_topology(t);
  if (!rep.ok) return rep;

  std::map<std::string, const Route*> routes;
  for (const auto& r : t.routes) routes[r.id] = &r;
  std::set<std::string> vessel_ids;
  for (const auto& v : t.vessels) vessel_ids.insert(v.id);

  std::set<std::string> assigned;
  for (const auto& a : p.assignments) {
    if (!vessel_ids.count(a.vessel)) {
      rep.add_error("assignment: unknown vessel " + a.vessel);
      continue;
    }
    if (!assigned.insert(a.vessel).second) {
      rep.add_error("vessel " + a.vessel + " assigned more than once");
      continue;
    }
    auto it = routes.find(a.route);
    if (it == routes.end()) {
      rep.add_error("vessel " + a.vessel + ": unknown route " + a.route);
      continue;
    }
    const auto& stops = it->second->stops;
    if (std::find(stops.begin(), stops.end(), a.start_port) == stops.end()) {
      rep.add_error("vessel " + a.vessel + ": start port " + a.start_port + " not on route " +
                    a.route);
    }
  }
  for (const auto& id : vessel_ids) {
    if (!assigned.count(id)) rep.add_error("vessel " + id + " has no assignment");
  }
  return rep;
}

std::vector<FeasibleTriple> feasible_triples(const Topology& t,
                                             const std::set<std::string>& unassigned) {
  std::vector<FeasibleTriple> out;
  for (const auto& v : t.vessels) {
    if (!unassigned.count(v.id)) continue;
    for (const auto& r : t.routes) {
      for (const auto& s : r.stops) out.push_back({v.id, r.id, s});
    }
  }
  return out;
}

namespace {

int lookup(const std::vector<std::pair<std::string, int>>& sorted, const std::string& id,
           const char* kind) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), id,
                             [](const auto& a, const std::string& b) { return a.first < b; });
  if (it == sorted.end() || it->first != id)
    throw Error(std::string("unknown ") + kind + " id: " + id);
  return it->second;
}

}  // namespace

TopoIndex::TopoIndex(const Topology& t) : topo_(&t) {
  auto rep = validate_topology(t);
  if (!rep.ok) throw Error("invalid topology:\n" + rep.to_string());

  for (int i = 0; i < static_cast<int>(t.ports.size()); ++i) port_ids_.push_back({t.ports[i].id, i});
  for (int i = 0; i < static_cast<int>(t.routes.size()); ++i)
    route_ids_.push_back({t.routes[i].id, i});
  for (int i = 0; i < static_cast<int>(t.vessels.size()); ++i)
    vessel_ids_.push_back({t.vessels[i].id, i});
  std::sort(port_ids_.begin(), port_ids_.end());
  std::sort(route_ids_.begin(), route_ids_.end());
  std::sort(vessel_ids_.begin(), vessel_ids_.end());

  const int np = num_ports();
  route_stops_.resize(t.routes.size());
  route_has_port_.resize(t.routes.size(), std::vector<char>(np, 0));
  for (size_t r = 0; r < t.routes.size(); ++r) {
    for (const auto& s : t.routes[r].stops) {
      int p = port_index(s);
      route_stops_[r].push_back(p);
      route_has_port_[r][p] = 1;
    }
  }

  for (const auto& od : t.order_model.pairs) {
    pair_ports_.push_back({port_index(od.origin), port_index(od.destination)});
  }

  sail_.assign(np, std::vector<std::int64_t>(np, -1));
  for (const auto& e : t.order_model.sail_days) {
    sail_[port_index(e.origin)][port_index(e.destination)] = e.days;
  }
}

int TopoIndex::port_index(const std::string& id) const { return lookup(port_ids_, id, "port"); }
int TopoIndex::route_index(const std::string& id) const { return lookup(route_ids_, id, "route"); }
int TopoIndex::vessel_index(const std::string& id) const {
  return lookup(vessel_ids_, id, "vessel");
}

std::int64_t TopoIndex::sail_days(int origin, int destination) const {
  std::int64_t d = sail_[origin][destination];
  return d < 0 ? 1 : d;
}

std::int64_t TopoIndex::handling_cap(int port) const {
  const auto& cap = topo_->ports[port].handling_cap;
  return cap ? *cap : kUnboundedCap;
}

std::vector<ResolvedAssignment> resolve_configuration(const TopoIndex& idx,
                                                      const FleetConfiguration& p) {
  auto rep = validate_configuration(idx.topo(), p);
  if (!rep.ok) throw Error("invalid configuration:\n" + rep.to_string());

  std::vector<ResolvedAssignment> out(idx.num_vessels());
  for (const auto& a : p.assignments) {
    ResolvedAssignment ra;
    ra.route = idx.route_index(a.route);
    ra.start_port = idx.port_index(a.start_port);
    const auto& stops = idx.route_stops(ra.route);
    ra.start_stop_pos =
        static_cast<int>(std::find(stops.begin(), stops.end(), ra.start_port) - stops.begin());
    out[idx.vessel_index(a.vessel)] = ra;
  }
  return out;
}

std::vector<char> servable_pairs(const TopoIndex& idx, const std::vector<int>& vessel_routes) {
  std::vector<char> ok(idx.pair_ports().size(), 0);
  for (size_t k = 0; k < ok.size(); ++k) {
    const auto [o, d] = idx.pair_ports()[k];
    for (int r : vessel_routes) {
      if (idx.route_contains(r, o) && idx.route_contains(r, d)) {
        ok[k] = 1;
        break;
      }
    }
  }
  return ok;
}

}  // namespace ccecr
