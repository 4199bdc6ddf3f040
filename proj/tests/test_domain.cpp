#include <doctest.h>

#include <set>

#include "core/domain.hpp"
#include "test_util.hpp"

using namespace ccecr;
using testutil::TwoPortParams;
using testutil::two_port_configuration;
using testutil::two_port_topology;

TEST_CASE("domain: a well-formed topology validates cleanly") {
  Topology t = two_port_topology({});
  auto rep = validate_topology(t);
  CHECK(rep.ok);
  CHECK(rep.issues.empty());
}

TEST_CASE("domain: validation catches each error class") {
  TwoPortParams base;

  SUBCASE("duplicate port id") {
    Topology t = two_port_topology(base);
    t.ports.push_back({"A", 5, 0, std::nullopt});
    CHECK_FALSE(validate_topology(t).ok);
  }
  SUBCASE("initial stock above capacity") {
    Topology t = two_port_topology(base);
    t.ports[0].initial_stock = t.ports[0].capacity + 1;
    CHECK_FALSE(validate_topology(t).ok);
  }
  SUBCASE("route with one stop") {
    Topology t = two_port_topology(base);
    t.routes[0].stops = {"A"};
    t.routes[0].leg_distances = {1.0};
    CHECK_FALSE(validate_topology(t).ok);
  }
  SUBCASE("route visiting an unknown port") {
    Topology t = two_port_topology(base);
    t.routes[0].stops = {"A", "Z"};
    CHECK_FALSE(validate_topology(t).ok);
  }
  SUBCASE("route visiting a port twice") {
    Topology t = two_port_topology(base);
    t.routes[0].stops = {"A", "B", "A"};
    t.routes[0].leg_distances = {1.0, 1.0, 1.0};
    CHECK_FALSE(validate_topology(t).ok);
  }
  SUBCASE("leg count mismatch") {
    Topology t = two_port_topology(base);
    t.routes[0].leg_distances = {1.0};
    CHECK_FALSE(validate_topology(t).ok);
  }
  SUBCASE("non-positive leg") {
    Topology t = two_port_topology(base);
    t.routes[0].leg_distances = {0.0, 1.0};
    CHECK_FALSE(validate_topology(t).ok);
  }
  SUBCASE("vessel without capacity") {
    Topology t = two_port_topology(base);
    t.vessels[0].capacity = 0;
    CHECK_FALSE(validate_topology(t).ok);
  }
  SUBCASE("speed noise out of range") {
    Topology t = two_port_topology(base);
    t.vessels[0].speed_noise.sigma = 1.0;
    CHECK_FALSE(validate_topology(t).ok);
  }
  SUBCASE("order pair with identical endpoints") {
    Topology t = two_port_topology(base);
    t.order_model.pairs.push_back({"A", "A", 1.0, {}, 0.0});
    CHECK_FALSE(validate_topology(t).ok);
  }
  SUBCASE("duplicate order pair") {
    Topology t = two_port_topology(base);
    t.order_model.pairs.push_back(t.order_model.pairs[0]);
    CHECK_FALSE(validate_topology(t).ok);
  }
  SUBCASE("missing sail days is a warning, not an error") {
    Topology t = two_port_topology(base);
    t.order_model.sail_days.clear();
    auto rep = validate_topology(t);
    CHECK(rep.ok);
    CHECK_FALSE(rep.issues.empty());
  }
}

TEST_CASE("domain: configuration validation") {
  Topology t = two_port_topology({});
  FleetConfiguration good = two_port_configuration({});
  CHECK(validate_configuration(t, good).ok);

  SUBCASE("unknown vessel") {
    FleetConfiguration c = good;
    c.assignments[0].vessel = "ghost";
    CHECK_FALSE(validate_configuration(t, c).ok);
  }
  SUBCASE("unknown route") {
    FleetConfiguration c = good;
    c.assignments[0].route = "ghost";
    CHECK_FALSE(validate_configuration(t, c).ok);
  }
  SUBCASE("start port not on the route") {
    Topology t3 = two_port_topology({});
    t3.ports.push_back({"C", 5, 0, std::nullopt});
    FleetConfiguration c = good;
    c.assignments[0].start_port = "C";
    CHECK_FALSE(validate_configuration(t3, c).ok);
  }
  SUBCASE("vessel assigned twice") {
    FleetConfiguration c = good;
    c.assignments.push_back(c.assignments[0]);
    CHECK_FALSE(validate_configuration(t, c).ok);
  }
  SUBCASE("vessel left unassigned") {
    FleetConfiguration c;
    CHECK_FALSE(validate_configuration(t, c).ok);
  }
}

TEST_CASE("domain: feasible triples enumerate route stops per vessel") {
  Topology t = two_port_topology({});
  t.routes.push_back({"r2", {"B", "A"}, {1.0, 1.0}});
  t.vessels.push_back({"v2", 3, {0.0}});

  auto triples = feasible_triples(t, {"v1", "v2"});
  // 2 vessels x 2 routes x 2 stops.
  CHECK(triples.size() == 8);
  auto one = feasible_triples(t, {"v2"});
  CHECK(one.size() == 4);
  for (const auto& tr : one) CHECK(tr.vessel == "v2");
}

TEST_CASE("domain: index lookups and sail day fallback") {
  Topology t = two_port_topology({});
  TopoIndex idx(t);
  CHECK(idx.num_ports() == 2);
  CHECK(idx.port_index("A") == 0);
  CHECK(idx.port_index("B") == 1);
  CHECK(idx.route_index("r1") == 0);
  CHECK(idx.vessel_index("v1") == 0);
  CHECK_THROWS_AS((void)idx.port_index("Z"), Error);

  CHECK(idx.route_contains(0, 0));
  CHECK(idx.route_contains(0, 1));
  CHECK(idx.route_stops(0) == std::vector<int>{0, 1});

  CHECK(idx.sail_days(0, 1) == 2);
  CHECK(idx.sail_days(1, 0) == 1);  // absent pair falls back to one day

  CHECK(idx.handling_cap(0) == TopoIndex::kUnboundedCap);
  Topology t2 = two_port_topology({});
  t2.ports[0].handling_cap = 4;
  TopoIndex idx2(t2);
  CHECK(idx2.handling_cap(0) == 4);
}

TEST_CASE("domain: index construction rejects invalid topologies") {
  Topology t = two_port_topology({});
  t.ports[0].initial_stock = 99;
  CHECK_THROWS_AS(TopoIndex{t}, Error);
}

TEST_CASE("domain: resolve_configuration orders by vessel and finds stop positions") {
  Topology t = two_port_topology({});
  t.vessels.push_back({"v2", 3, {0.0}});
  FleetConfiguration c;
  c.assignments = {{"v2", "r1", "B"}, {"v1", "r1", "A"}};
  TopoIndex idx(t);
  auto resolved = resolve_configuration(idx, c);
  REQUIRE(resolved.size() == 2);
  CHECK(resolved[0].route == 0);
  CHECK(resolved[0].start_port == 0);
  CHECK(resolved[0].start_stop_pos == 0);
  CHECK(resolved[1].start_port == 1);
  CHECK(resolved[1].start_stop_pos == 1);

  FleetConfiguration bad;
  bad.assignments = {{"v1", "r1", "A"}};
  CHECK_THROWS_AS(resolve_configuration(idx, bad), Error);
}
