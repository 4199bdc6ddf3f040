#ifndef CCECR_TESTS_TEST_UTIL_HPP
#define CCECR_TESTS_TEST_UTIL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/domain.hpp"
#include "core/sim.hpp"

namespace ccecr::testutil {

// Two ports A, B on one cyclic route A -> B -> A, one vessel, one A->B order
// pair with constant demand. The workhorse for hand-checked scenarios.
struct TwoPortParams {
  std::int64_t cap_a = 10, cap_b = 10;
  std::int64_t init_a = 5, init_b = 5;
  double leg_ab = 2.0, leg_ba = 2.0;
  std::int64_t vessel_cap = 5;
  double demand_ab = 3.0;  // constant daily mean
  double noise_cv = 0.0;
  double sigma = 0.0;
  std::int64_t sail_ab = 2;
  std::int64_t delay = 1;
  std::int64_t horizon = 7;
  std::string start_port = "A";
  bool with_vessel = true;
};

inline Topology two_port_topology(const TwoPortParams& p) {
  Topology t;
  t.ports = {{"A", p.cap_a, p.init_a, std::nullopt}, {"B", p.cap_b, p.init_b, std::nullopt}};
  if (p.with_vessel) {
    t.routes = {{"r1", {"A", "B"}, {p.leg_ab, p.leg_ba}}};
    t.vessels = {{"v1", p.vessel_cap, {p.sigma}}};
  }
  t.order_model.pairs = {{"A", "B", p.demand_ab, {}, p.noise_cv}};
  t.order_model.sail_days = {{"A", "B", p.sail_ab}};
  t.empty_return_delay = p.delay;
  t.horizon = p.horizon;
  return t;
}

inline FleetConfiguration two_port_configuration(const TwoPortParams& p) {
  FleetConfiguration c;
  if (p.with_vessel) c.assignments = {{"v1", "r1", p.start_port}};
  return c;
}

// Replays a fixed per-decision delta sequence (across all vessels, in
// decision order) and records what the simulator actually applied.
class ScriptedPolicy : public Policy {
 public:
  explicit ScriptedPolicy(std::vector<std::int64_t> deltas) : deltas_(std::move(deltas)) {}

  RepositionAction act(Simulator&, const DecisionPoint&, Rng&) override {
    std::int64_t delta = next_ < deltas_.size() ? deltas_[next_] : 0;
    next_++;
    return {delta};
  }
  void on_applied(const DecisionPoint&, std::int64_t, std::int64_t applied) override {
    applied_.push_back(applied);
  }
  void begin_episode(Simulator&) override {
    next_ = 0;
    applied_.clear();
  }

  const std::vector<std::int64_t>& applied() const { return applied_; }

 private:
  std::vector<std::int64_t> deltas_;
  size_t next_ = 0;
  std::vector<std::int64_t> applied_;
};

}  // namespace ccecr::testutil

#endif  // CCECR_TESTS_TEST_UTIL_HPP
