#include <doctest.h>

#include "core/policies.hpp"
#include "core/sim.hpp"
#include "test_util.hpp"

using namespace ccecr;
using testutil::TwoPortParams;
using testutil::two_port_configuration;
using testutil::two_port_topology;

namespace {

Topology asymmetric_topology() {
  // A exports heavily, B imports, C is balanced (no demand at all).
  Topology t;
  t.ports = {{"A", 20, 10, std::nullopt}, {"B", 20, 10, std::nullopt}, {"C", 20, 10, std::nullopt}};
  t.routes = {{"r1", {"A", "B", "C"}, {1.0, 1.0, 1.0}}};
  t.vessels = {{"v1", 8, {0.0}}};
  t.order_model.pairs = {{"A", "B", 4.0, {}, 0.0}};
  t.order_model.sail_days = {{"A", "B", 1}};
  t.horizon = 10;
  return t;
}

}  // namespace

TEST_CASE("policies: port role classification") {
  Topology t = asymmetric_topology();
  TopoIndex idx(t);
  auto roles = classify_ports(idx);
  REQUIRE(roles.size() == 3);
  CHECK(roles[0].role == PortRole::kExporting);
  CHECK(roles[0].net_outflow == doctest::Approx(4.0));
  CHECK(roles[1].role == PortRole::kImporting);
  CHECK(roles[1].net_outflow == doctest::Approx(-4.0));
  CHECK(roles[2].role == PortRole::kBalanced);
  CHECK(roles[2].net_outflow == doctest::Approx(0.0));
}

TEST_CASE("policies: near-balanced flows stay balanced under the threshold") {
  Topology t = asymmetric_topology();
  t.order_model.pairs = {{"A", "B", 4.0, {}, 0.0}, {"B", "A", 3.9, {}, 0.0}};
  t.order_model.sail_days.push_back({"B", "A", 1});
  TopoIndex idx(t);
  auto roles = classify_ports(idx);
  // Net 0.1 vs theta = 0.10 * 7.9 / 3 = 0.263: both balanced.
  CHECK(roles[0].role == PortRole::kBalanced);
  CHECK(roles[1].role == PortRole::kBalanced);
}

TEST_CASE("policies: feasible interval matches the simulator clamp") {
  Observation o;
  o.port_stock = 3;
  o.port_capacity = 10;
  o.handling_cap = 2;
  o.vessel_empties = 5;
  o.vessel_free = 4;
  CHECK(feasible_low(o) == -2);   // handling cap binds the discharge
  CHECK(feasible_high(o) == 2);   // and the load
  o.handling_cap = TopoIndex::kUnboundedCap;
  CHECK(feasible_low(o) == -5);   // empties aboard bind
  CHECK(feasible_high(o) == 3);   // stock binds
  o.port_stock = 9;
  CHECK(feasible_low(o) == -1);   // room binds
  CHECK(feasible_high(o) == 4);   // vessel space binds
}

TEST_CASE("policies: random policy always proposes feasible deltas") {
  Observation o;
  o.port_stock = 2;
  o.port_capacity = 5;
  o.handling_cap = TopoIndex::kUnboundedCap;
  o.vessel_empties = 1;
  o.vessel_free = 3;
  DecisionPoint d;
  d.obs = o;
  RandomPolicy pol;
  Rng rng(3);
  Topology t = two_port_topology({});
  TopoIndex idx(t);
  Simulator sim(idx, two_port_configuration({}), 0);
  for (int i = 0; i < 200; ++i) {
    std::int64_t delta = pol.act(sim, d, rng).delta;
    CHECK(delta >= -1);
    CHECK(delta <= 2);
  }
}

TEST_CASE("policies: heuristic discharges at exporters and loads at importers") {
  Topology t = asymmetric_topology();
  TopoIndex idx(t);
  HeurPolicy pol(classify_ports(idx));
  Topology t2 = two_port_topology({});
  TopoIndex idx2(t2);
  Simulator sim(idx2, two_port_configuration({}), 0);
  Rng rng(5);

  DecisionPoint d;
  d.obs.port_capacity = 20;
  d.obs.handling_cap = TopoIndex::kUnboundedCap;

  // Exporting port, 6 empties aboard, plenty of room: drop 3..6.
  d.port = 0;
  d.obs.port_stock = 2;
  d.obs.vessel_empties = 6;
  d.obs.vessel_free = 2;
  for (int i = 0; i < 100; ++i) {
    std::int64_t delta = pol.act(sim, d, rng).delta;
    CHECK(delta <= -3);
    CHECK(delta >= -6);
  }
  // Exporting port with nothing aboard: no-op.
  d.obs.vessel_empties = 0;
  CHECK(pol.act(sim, d, rng).delta == 0);

  // Importing port with stock 5 and free space 8: load 3..5.
  d.port = 1;
  d.obs.port_stock = 5;
  d.obs.vessel_empties = 0;
  d.obs.vessel_free = 8;
  for (int i = 0; i < 100; ++i) {
    std::int64_t delta = pol.act(sim, d, rng).delta;
    CHECK(delta >= 3);
    CHECK(delta <= 5);
  }
  // Balanced port: no-op.
  d.port = 2;
  CHECK(pol.act(sim, d, rng).delta == 0);
}

TEST_CASE("policies: heuristic beats random on an export/import imbalance") {
  // A two-port shuttle where B accumulates returns and A starves: moving
  // empties back to A is exactly what the heuristic does.
  TwoPortParams p;
  p.cap_a = 12;
  p.cap_b = 12;
  p.init_a = 6;
  p.init_b = 6;
  p.leg_ab = 1.0;
  p.leg_ba = 1.0;
  p.vessel_cap = 6;
  p.demand_ab = 3.0;
  p.sail_ab = 1;
  p.delay = 1;
  p.horizon = 40;
  Topology t = two_port_topology(p);
  TopoIndex idx(t);
  FleetConfiguration cfg = two_port_configuration(p);

  RandomPolicy rnd;
  HeurPolicy heur(classify_ports(idx));
  double rnd_short = 0.0, heur_short = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    rnd_short += static_cast<double>(rollout(idx, cfg, rnd, seed).total_shortage);
    heur_short += static_cast<double>(rollout(idx, cfg, heur, seed).total_shortage);
  }
  CHECK(heur_short < rnd_short);
}

TEST_CASE("policies: plan executor replays moves by vessel and ordinal") {
  Plan plan;
  plan.moves = {{5, -5, 2}};
  PlanExecutor ex;
  ex.install(plan);

  Topology t = two_port_topology({});
  TopoIndex idx(t);
  Simulator sim(idx, two_port_configuration({}), 0);
  Rng rng(1);
  DecisionPoint d;
  d.vessel = 0;
  CHECK(ex.act(sim, d, rng).delta == 5);
  CHECK(ex.act(sim, d, rng).delta == -5);
  CHECK(ex.act(sim, d, rng).delta == 2);
  CHECK(ex.act(sim, d, rng).delta == 0);  // past the plan end

  ex.on_applied(d, 5, 5);
  CHECK(ex.clamp_divergences() == 0);
  ex.on_applied(d, 5, 3);
  CHECK(ex.clamp_divergences() == 1);
}
