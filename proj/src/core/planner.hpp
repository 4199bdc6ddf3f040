#ifndef CCECR_CORE_PLANNER_HPP
#define CCECR_CORE_PLANNER_HPP

#include <cstdint>
#include <vector>

#include "core/mincostflow.hpp"
#include "core/plan.hpp"
#include "core/policies.hpp"
#include "core/sim.hpp"

namespace ccecr {

struct ForecastCall {
  int port = 0;
  std::int64_t day = 0;
  bool operator==(const ForecastCall&) const = default;
};

// Noisy estimates of demand and vessel arrivals over a planning window.
// Demand: clipped trigonometric means, each perturbed by (1 + eps) with eps
// uniform on [-noise, +noise], rounded. Arrivals: the first call per vessel
// is the true scheduled one from the snapshot; later legs use nominal leg
// times perturbed by the same scheme, floored at one day.
struct Forecast {
  std::int64_t from_day = 0;
  std::int64_t window_end = 0;  // exclusive
  bool mid_day = false;
  double noise_level = 0.0;
  std::vector<std::vector<std::int64_t>> demand;  // [pair][day - from_day]
  std::vector<std::vector<ForecastCall>> calls;   // [vessel], strictly increasing days
};

Forecast make_forecast(const TopoIndex& idx, const PlanningSnapshot& snap, std::int64_t plan_len,
                       double noise_level, Rng& rng);

// Time-expanded min-cost-flow model of the planning window. Serving demand
// earns -R per container (with a tiny per-day increment so earlier serving
// wins ties, matching greedy fulfillment); load/discharge moves cost
// kMoveCost; pool deferral costs kDeferCost per day so matured containers
// enter stock as soon as room exists, exactly like the simulator.
struct BuiltNetwork {
  MinCostFlow flow{0};
  int sink = 0;

  struct DemandArc {
    int pair = 0;
    std::int64_t rel_day = 0;
    int arc = 0;
  };
  std::vector<DemandArc> demand_arcs;

  struct CallArc {
    int vessel = 0;
    int ordinal = 0;
    int load_arc = -1;
    int discharge_arc = -1;
  };
  std::vector<CallArc> call_arcs;

  std::int64_t planned_demand = 0;  // total forecast demand on planned days
  int num_nodes = 0;
  int num_arcs = 0;

  // Strict hierarchy: serving dominates moves, moves dominate the small
  // costs, and the small costs can never add up to one move within a window
  // (60 days * (defer + leg + tiebreak) << kMoveCost).
  static constexpr std::int64_t kServeReward = 1000000;  // R
  static constexpr std::int64_t kMoveCost = 1000;        // 1e-3 R
  static constexpr std::int64_t kDeferCost = 1;          // pool enters stock asap
  static constexpr std::int64_t kLegCost = 1;            // idle empties leave the vessel early
  static constexpr std::int64_t kServeDayTiebreak = 1;   // earlier serving wins, like greedy
};

BuiltNetwork build_flow_network(const TopoIndex& idx, const Forecast& f,
                                const PlanningSnapshot& snap);

// build + solve + extract. Throws if the network cannot route its supplies
// (cannot happen for networks produced by build_flow_network).
Plan solve_plan(const TopoIndex& idx, const Forecast& f, const PlanningSnapshot& snap);

// Day-0 snapshot of a not-yet-started episode under configuration p.
PlanningSnapshot fresh_snapshot(const TopoIndex& idx, const FleetConfiguration& p);

// Planned satisfied demand over the full horizon for configuration p, built
// from forecast_seed. The demand perturbations are drawn first, so two
// configurations share identical demand noise under the same seed (the
// LS-NET fixed-forecast fitness).
std::int64_t plan_objective(const TopoIndex& idx, const FleetConfiguration& p,
                            std::uint64_t forecast_seed, double noise_level);

// One plan at day 0 over the whole horizon, never replanned.
class OrPolicy : public PlanExecutor {
 public:
  OrPolicy(double noise_level, std::uint64_t forecast_seed)
      : noise_level_(noise_level), rng_(forecast_seed) {}
  void begin_episode(Simulator& sim) override;

 private:
  double noise_level_;
  Rng rng_;
};

// Rolling horizon: replan every window_w days from the true simulator state
// with a fresh noisy forecast over the next plan_l days.
class OriPolicy : public PlanExecutor {
 public:
  OriPolicy(std::int64_t window_w, std::int64_t plan_l, double noise_level,
            std::uint64_t forecast_seed)
      : window_w_(window_w), plan_l_(plan_l), noise_level_(noise_level), rng_(forecast_seed) {}
  void begin_episode(Simulator& sim) override;
  RepositionAction act(Simulator& sim, const DecisionPoint& d, Rng& rng) override;

  std::int64_t plans_made() const { return plans_made_; }

 private:
  std::int64_t window_w_;
  std::int64_t plan_l_;
  double noise_level_;
  Rng rng_;
  std::int64_t plans_made_ = 0;
};

struct OriParams {
  std::int64_t window_w = 20;
  std::int64_t plan_l = 60;
  double noise_level = 0.2;
};

}  // namespace ccecr

#endif  // CCECR_CORE_PLANNER_HPP
