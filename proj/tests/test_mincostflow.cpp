#include <doctest.h>

#include <vector>

#include "core/domain.hpp"
#include "core/mincostflow.hpp"
#include "core/rng.hpp"

using namespace ccecr;

TEST_CASE("mcmf: transportation instance with a known optimum") {
  // Supplies s0 = 5, s1 = 5; demands d0 = 5, d1 = 5.
  // Costs: s0->d0 1, s0->d1 3, s1->d0 2, s1->d1 1. Optimum = 5*1 + 5*1 = 10.
  MinCostFlow g(4);
  int a00 = g.add_arc(0, 2, 10, 1);
  int a01 = g.add_arc(0, 3, 10, 3);
  int a10 = g.add_arc(1, 2, 10, 2);
  int a11 = g.add_arc(1, 3, 10, 1);
  g.add_excess(0, 5);
  g.add_excess(1, 5);
  g.add_excess(2, -5);
  g.add_excess(3, -5);
  auto res = g.solve();
  CHECK(res.feasible);
  CHECK(res.routed == 10);
  CHECK(res.cost == 10);
  CHECK(g.flow(a00) == 5);
  CHECK(g.flow(a11) == 5);
  CHECK(g.flow(a01) == 0);
  CHECK(g.flow(a10) == 0);
  CHECK(g.check_complementary_slackness());
}

TEST_CASE("mcmf: negative arc costs are profitable detours") {
  // 0 -> 1 -> 2 costs 1 + 1; 0 -> 3 -> 2 costs 5 - 4 = 1. Both carry 1 unit.
  MinCostFlow g(4);
  g.add_arc(0, 1, 1, 1);
  g.add_arc(1, 2, 1, 1);
  g.add_arc(0, 3, 1, 5);
  int neg = g.add_arc(3, 2, 1, -4);
  g.add_excess(0, 2);
  g.add_excess(2, -2);
  auto res = g.solve();
  CHECK(res.feasible);
  CHECK(res.cost == 3);
  CHECK(g.flow(neg) == 1);
  CHECK(g.check_complementary_slackness());
}

TEST_CASE("mcmf: capacity shortfall is reported as infeasible") {
  MinCostFlow g(2);
  g.add_arc(0, 1, 3, 1);
  g.add_excess(0, 5);
  g.add_excess(1, -5);
  auto res = g.solve();
  CHECK_FALSE(res.feasible);
  CHECK(res.routed == 3);
}

TEST_CASE("mcmf: zero supply solves trivially") {
  MinCostFlow g(2);
  g.add_arc(0, 1, 3, 1);
  auto res = g.solve();
  CHECK(res.feasible);
  CHECK(res.routed == 0);
  CHECK(res.cost == 0);
}

TEST_CASE("mcmf: negative cycle reachable from a supply is rejected") {
  MinCostFlow g(2);
  g.add_arc(0, 1, 1, -2);
  g.add_arc(1, 0, 1, 1);
  g.add_excess(0, 1);
  g.add_excess(1, -1);
  CHECK_THROWS_AS(g.solve(), Error);
}

TEST_CASE("mcmf: flow conservation and slackness on random layered networks") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    // Three layers: 2 sources, 3 middle, 2 sinks, random caps and costs
    // (some negative on the last layer).
    MinCostFlow g(7);
    std::vector<int> arcs;
    std::vector<std::int64_t> into(7, 0), out_of(7, 0);
    for (int s = 0; s < 2; ++s)
      for (int m = 2; m < 5; ++m) arcs.push_back(g.add_arc(s, m, rng.uniform_int(0, 6), rng.uniform_int(1, 9)));
    for (int m = 2; m < 5; ++m)
      for (int t = 5; t < 7; ++t) arcs.push_back(g.add_arc(m, t, rng.uniform_int(0, 6), rng.uniform_int(-3, 9)));
    std::int64_t supply = rng.uniform_int(0, 5);
    g.add_excess(0, supply);
    g.add_excess(1, supply);
    g.add_excess(5, -supply);
    g.add_excess(6, -supply);
    auto res = g.solve();
    CHECK(res.routed <= 2 * supply);
    if (res.feasible) CHECK(res.routed == 2 * supply);
    CHECK(g.check_complementary_slackness());

    // Conservation at middle nodes: inflow equals outflow.
    size_t i = 0;
    for (int s = 0; s < 2; ++s)
      for (int m = 2; m < 5; ++m) into[m] += g.flow(arcs[i]), ++i;
    for (int m = 2; m < 5; ++m)
      for (int t = 5; t < 7; ++t) out_of[m] += g.flow(arcs[i]), ++i;
    for (int m = 2; m < 5; ++m) CHECK(into[m] == out_of[m]);
  }
}

TEST_CASE("mcmf: integral flows never exceed capacity") {
  Rng rng(7);
  MinCostFlow g(6);
  std::vector<int> arcs;
  std::vector<std::int64_t> caps;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 6; ++j) {
      std::int64_t c = rng.uniform_int(0, 4);
      arcs.push_back(g.add_arc(i, j, c, rng.uniform_int(-2, 8)));
      caps.push_back(c);
    }
  g.add_excess(0, 6);
  g.add_excess(5, -6);
  (void)g.solve();
  for (size_t i = 0; i < arcs.size(); ++i) {
    CHECK(g.flow(arcs[i]) >= 0);
    CHECK(g.flow(arcs[i]) <= caps[i]);
  }
}
