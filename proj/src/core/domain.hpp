#ifndef CCECR_CORE_DOMAIN_HPP
#define CCECR_CORE_DOMAIN_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccecr {

// Thrown for unrecoverable misuse (invalid inputs to operations that require
// validated data, corrupted state, IO failures carry their own message).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct Port {
  std::string id;
  std::int64_t capacity = 0;       // max empty-container stock
  std::int64_t initial_stock = 0;  // 0 <= initial_stock <= capacity
  // Max containers movable per vessel call; nullopt = unbounded.
  std::optional<std::int64_t> handling_cap;
};

struct Route {
  std::string id;
  // Each stop appears once; the cycle wraps from the last stop to the first.
  std::vector<std::string> stops;
  std::vector<double> leg_distances;  // nominal sailing days per leg, stops.size() entries
};

struct SpeedNoise {
  // Travel-time multiplier drawn uniformly from [1 - sigma, 1 + sigma].
  double sigma = 0.0;
};

struct VesselSpec {
  std::string id;
  std::int64_t capacity = 0;
  SpeedNoise speed_noise;
};

struct DemandPeriod {
  double amplitude = 0.0;
  double period_days = 1.0;
  double phase = 0.0;
};

struct OrderPair {
  std::string origin;
  std::string destination;
  double base_volume = 0.0;  // containers per day
  std::vector<DemandPeriod> periods;
  double noise_cv = 0.0;
};

struct SailDaysEntry {
  std::string origin;
  std::string destination;
  std::int64_t days = 1;
};

struct OrderModel {
  std::vector<OrderPair> pairs;
  std::vector<SailDaysEntry> sail_days;  // nominal origin->destination shipping days
};

struct Topology {
  std::vector<Port> ports;
  std::vector<Route> routes;
  std::vector<VesselSpec> vessels;
  OrderModel order_model;
  std::int64_t empty_return_delay = 2;  // days before discharged laden become stock
  std::int64_t horizon = 1;             // days
};

struct Assignment {
  std::string vessel;
  std::string route;
  std::string start_port;
  bool operator==(const Assignment&) const = default;
};

// One (vessel, route, start-port) triple per vessel: the environment
// configuration that fleet-deployment search optimizes over.
struct FleetConfiguration {
  std::vector<Assignment> assignments;
};

enum class Severity { kWarning, kError };

struct Issue {
  Severity severity = Severity::kError;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Issue> issues;

  void add_error(std::string msg) {
    ok = false;
    issues.push_back({Severity::kError, std::move(msg)});
  }
  void add_warning(std::string msg) { issues.push_back({Severity::kWarning, std::move(msg)}); }
  std::string to_string() const;
};

ValidationReport validate_topology(const Topology& t);
ValidationReport validate_configuration(const Topology& t, const FleetConfiguration& p);

struct FeasibleTriple {
  std::string vessel;
  std::string route;
  std::string start_port;
};

// All unmasked (vessel, route, start-port) triples for the given unassigned
// vessels: every route, every stop on that route.
std::vector<FeasibleTriple> feasible_triples(const Topology& t,
                                             const std::set<std::string>& unassigned);

// Index structures resolved once from a validated topology. All hot paths
// work on dense integer indices; ids only appear at the file boundary.
class TopoIndex {
 public:
  explicit TopoIndex(const Topology& t);
  TopoIndex(Topology&&) = delete;  // borrows the topology, so no temporaries

  const Topology& topo() const { return *topo_; }
  int num_ports() const { return static_cast<int>(topo_->ports.size()); }
  int num_routes() const { return static_cast<int>(topo_->routes.size()); }
  int num_vessels() const { return static_cast<int>(topo_->vessels.size()); }

  int port_index(const std::string& id) const;
  int route_index(const std::string& id) const;
  int vessel_index(const std::string& id) const;

  const std::vector<int>& route_stops(int route) const { return route_stops_[route]; }
  bool route_contains(int route, int port) const { return route_has_port_[route][port]; }

  // Resolved demand pairs: (origin index, destination index) aligned with
  // topo().order_model.pairs.
  const std::vector<std::pair<int, int>>& pair_ports() const { return pair_ports_; }

  // Nominal shipping days between two ports, from the order model lookup.
  // Falls back to 1 day if the pair is missing (validation warns about it).
  std::int64_t sail_days(int origin, int destination) const;

  std::int64_t handling_cap(int port) const;  // unbounded mapped to a large sentinel

  static constexpr std::int64_t kUnboundedCap = (std::int64_t{1} << 60);

 private:
  const Topology* topo_;
  std::vector<std::pair<std::string, int>> port_ids_, route_ids_, vessel_ids_;  // sorted
  std::vector<std::vector<int>> route_stops_;
  std::vector<std::vector<char>> route_has_port_;
  std::vector<std::pair<int, int>> pair_ports_;
  std::vector<std::vector<std::int64_t>> sail_;  // -1 where absent
};

struct ResolvedAssignment {
  int route = 0;
  int start_port = 0;       // port index
  int start_stop_pos = 0;   // position of start_port within the route's stops
};

// Per-vessel resolved assignments, ordered like topo().vessels. Throws if the
// configuration is invalid for the topology.
std::vector<ResolvedAssignment> resolve_configuration(const TopoIndex& idx,
                                                      const FleetConfiguration& p);

// Which order pairs the deployed fleet can carry: pair k is servable iff some
// assigned vessel's route calls at both its ports. Orders for other pairs are
// refused (no booking without a ship), not served into stranded cargo.
std::vector<char> servable_pairs(const TopoIndex& idx, const std::vector<int>& vessel_routes);

}  // namespace ccecr

#endif  // CCECR_CORE_DOMAIN_HPP
