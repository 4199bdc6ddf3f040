#include <doctest.h>

#include <cstdio>

#include "core/topology_io.hpp"
#include "test_util.hpp"

using namespace ccecr;
using testutil::two_port_topology;

namespace {

Topology fancy_topology() {
  Topology t = two_port_topology({});
  t.ports[0].handling_cap = 7;
  t.order_model.pairs[0].periods = {{0.5, 7.0, 0.25}, {0.1, 30.0, 0.0}};
  t.order_model.pairs[0].noise_cv = 0.2;
  return t;
}

}  // namespace

TEST_CASE("topology_io: serialization round-trips byte-identically") {
  Topology t = fancy_topology();
  std::string a = topology_to_json(t);
  Topology back = topology_from_json(a);
  std::string b = topology_to_json(back);
  CHECK(a == b);
  CHECK(back.ports[0].handling_cap.has_value());
  CHECK(*back.ports[0].handling_cap == 7);
  CHECK_FALSE(back.ports[1].handling_cap.has_value());
  CHECK(back.order_model.pairs[0].periods.size() == 2);
  CHECK(back.horizon == t.horizon);
  CHECK(back.empty_return_delay == t.empty_return_delay);
}

TEST_CASE("topology_io: configuration round-trip") {
  FleetConfiguration p;
  p.assignments = {{"v1", "r1", "A"}, {"v2", "r2", "B"}};
  std::string a = configuration_to_json(p);
  FleetConfiguration back = configuration_from_json(a);
  CHECK(configuration_to_json(back) == a);
  REQUIRE(back.assignments.size() == 2);
  CHECK(back.assignments[1].start_port == "B");
}

TEST_CASE("topology_io: schema_version is required and checked") {
  CHECK_THROWS_AS(topology_from_json("{}"), Error);
  CHECK_THROWS_AS(topology_from_json("{\"schema_version\": 99}"), Error);
  CHECK_THROWS_AS(topology_from_json("not json"), Error);
  CHECK_THROWS_AS(configuration_from_json("{\"assignments\": []}"), Error);
}

TEST_CASE("topology_io: missing required keys are reported with context") {
  std::string txt = R"({"schema_version": 1, "horizon": 5, "ports": [{"id": "A"}],
                        "routes": [], "vessels": [], "order_model": {"pairs": []}})";
  CHECK_THROWS_WITH_AS(topology_from_json(txt), doctest::Contains("capacity"), Error);
}

TEST_CASE("topology_io: fingerprint is stable and content sensitive") {
  Topology t = fancy_topology();
  std::uint64_t f1 = topology_fingerprint(t);
  CHECK(f1 == topology_fingerprint(topology_from_json(topology_to_json(t))));
  Topology t2 = t;
  t2.ports[0].capacity++;
  CHECK(topology_fingerprint(t2) != f1);
}

TEST_CASE("topology_io: file round-trip") {
  std::string path = "io_roundtrip_tmp.json";
  Topology t = fancy_topology();
  save_topology(t, path);
  Topology back = load_topology(path);
  CHECK(topology_to_json(back) == topology_to_json(t));
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_topology("does_not_exist.json"), Error);
}
