#ifndef CCECR_CORE_SIM_HPP
#define CCECR_CORE_SIM_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "core/domain.hpp"
#include "core/rng.hpp"

namespace ccecr {

using std::int64_t;

struct RepositionAction {
  // Positive: load empties from port onto vessel. Negative: discharge.
  int64_t delta = 0;
};

struct Observation {
  int64_t port_stock = 0;
  int64_t port_capacity = 0;
  int64_t handling_cap = 0;  // TopoIndex::kUnboundedCap when unbounded
  int64_t vessel_empties = 0;
  int64_t vessel_free = 0;  // capacity minus empties minus laden aboard
  double recent_demand = 0.0;    // this port, trailing window sum
  double recent_shortage = 0.0;  // this port, trailing window sum
  int64_t day = 0;
  int64_t horizon = 0;
};

struct DecisionPoint {
  int vessel = 0;  // dense indices; ids resolvable through TopoIndex
  int port = 0;
  int64_t day = 0;
  std::uint64_t ticket = 0;  // matches a decision to its apply_action call
  Observation obs;
};

struct EpisodeMetrics {
  int64_t total_demand = 0;
  int64_t total_shortage = 0;
  double fulfillment_pct = 100.0;  // 100 when total_demand == 0
  double discounted_return = 0.0;
  // Row-major [day][port].
  std::vector<int64_t> shortage_by_port_day;
  int64_t num_decisions = 0;
};

struct TraceRow {
  int64_t day = 0;
  int port = 0;
  int64_t stock = 0;  // end of day
  int64_t demand = 0;
  int64_t fulfilled = 0;
  int64_t shortage = 0;
};

// Sampling primitives, exposed for direct testing.
std::vector<int64_t> sample_orders(const TopoIndex& idx, int64_t day, Rng& rng);  // per pair
double order_mean(const OrderPair& od, int64_t day);  // clipped trigonometric mean
int64_t sample_travel_time(const VesselSpec& v, double leg_days, Rng& rng);

struct VesselSnapshot {
  int route = 0;
  int next_stop_pos = 0;       // stop position of the next (or current) call
  int64_t next_arrival_day = 0;
  int64_t empties = 0;
  std::vector<int64_t> laden_by_dest;  // size = num ports
};

struct PoolEntry {
  int port = 0;
  int64_t mature_day = 0;
  int64_t qty = 0;
};

// Everything a planner may read when replanning. mid_day means the snapshot
// was taken at a decision point: the day's fulfillment and maturation already
// ran, and vessels with next_arrival_day == day are exactly the unprocessed
// calls of that day.
struct PlanningSnapshot {
  int64_t day = 0;
  bool mid_day = false;
  std::vector<int64_t> stock;
  std::vector<PoolEntry> pool;
  std::vector<VesselSnapshot> vessels;
  std::vector<std::vector<int64_t>> waiting_laden;  // [origin][dest]
};

// Discrete-event engine. Day pipeline: fulfill demand from start-of-day stock
// (greedy, pair order), mature the pool (deferred when the port is full),
// process vessel arrivals in (port, vessel) order. Each arrival discharges
// destination laden into the pool, emits a DecisionPoint, applies the clamped
// action, then loads waiting laden for ports on its route (destination index
// order) and departs. Strict next_decision/apply_action alternation.
class Simulator {
 public:
  Simulator(const TopoIndex& idx, const FleetConfiguration& p, std::uint64_t seed,
            double gamma = 1.0);

  // Advances to the next vessel arrival; nullopt when the horizon is reached
  // (metrics are final from then on).
  std::optional<DecisionPoint> next_decision();

  // Returns the clamped delta actually applied. Throws on a stale ticket.
  int64_t apply_action(const DecisionPoint& d, RepositionAction a);

  bool finished() const { return finished_; }
  int64_t day() const { return day_; }
  const EpisodeMetrics& metrics() const { return metrics_; }
  const TopoIndex& index() const { return *idx_; }

  PlanningSnapshot snapshot() const;

  // Conservation identity: port stocks + vessel empties + vessel laden +
  // maturity pool + origin-waiting laden. Constant over an episode.
  int64_t container_total() const;
  int64_t port_stock(int h) const { return stock_[h]; }

  void enable_trace(std::vector<TraceRow>* out) { trace_ = out; }

 private:
  struct VesselState {
    int route = 0;
    int stop_pos = 0;  // position (within route stops) of the next arrival
    int64_t arrival_day = 0;
    int64_t empties = 0;
    std::vector<int64_t> laden;  // by destination port
    int64_t laden_total = 0;
  };

  void start_day();
  void finish_arrival(int v);  // laden pickup + departure scheduling
  void mature_pool();
  void record_epoch_reward(int64_t epoch_day);

  const TopoIndex* idx_;
  Rng rng_;
  double gamma_;
  int64_t day_ = 0;
  int64_t horizon_;
  bool day_open_ = false;  // fulfillment/maturation done, arrivals in flight
  bool finished_ = false;

  std::vector<int64_t> stock_;
  std::vector<PoolEntry> pool_;
  std::vector<VesselState> vessels_;
  std::vector<std::vector<int64_t>> waiting_;  // [origin][dest]
  std::vector<char> pair_servable_;            // some vessel's route covers the pair

  std::vector<int> arrivals_today_;  // vessel indices, (port, vessel) sorted
  size_t arrival_cursor_ = 0;
  bool decision_pending_ = false;
  std::uint64_t next_ticket_ = 1;

  // Per-day accounting for observations and trace.
  std::vector<int64_t> day_demand_, day_fulfilled_, day_shortage_;   // per port, current day
  std::vector<std::vector<int64_t>> hist_demand_, hist_shortage_;    // [day][port]
  int64_t cum_shortage_ = 0;
  int64_t shortage_at_last_epoch_ = 0;

  EpisodeMetrics metrics_;
  std::vector<TraceRow>* trace_ = nullptr;

  static constexpr int kObsWindow = 7;
};

// Repositioning policy. Rand/Heur read only d.obs; planning policies may
// take a snapshot from the simulator (privileged replanning access).
class Policy {
 public:
  virtual ~Policy() = default;
  virtual void begin_episode(Simulator& sim) { (void)sim; }
  virtual RepositionAction act(Simulator& sim, const DecisionPoint& d, Rng& rng) = 0;
  // Feedback after the simulator clamps; used for plan-divergence accounting.
  virtual void on_applied(const DecisionPoint& d, int64_t requested, int64_t applied) {
    (void)d;
    (void)requested;
    (void)applied;
  }
};

// Runs one full episode. World randomness and policy randomness come from
// separate streams derived from seed, so the realized world is identical
// across policies given the same seed (paired comparisons).
EpisodeMetrics rollout(const TopoIndex& idx, const FleetConfiguration& p, Policy& policy,
                       std::uint64_t seed, double gamma = 1.0,
                       std::vector<TraceRow>* trace = nullptr);

std::string trace_to_csv(const TopoIndex& idx, const std::vector<TraceRow>& rows);

}  // namespace ccecr

#endif  // CCECR_CORE_SIM_HPP
