#ifndef CCECR_CORE_POLICIES_HPP
#define CCECR_CORE_POLICIES_HPP

#include <vector>

#include "core/plan.hpp"
#include "core/sim.hpp"

namespace ccecr {

enum class PortRole { kExporting, kImporting, kBalanced };

struct PortRoleInfo {
  PortRole role = PortRole::kBalanced;
  double net_outflow = 0.0;  // mean daily outbound minus inbound demand
};

// Role threshold: |net| must exceed theta_frac of the mean daily total demand
// per port. Means are horizon averages of the clipped trigonometric demand.
std::vector<PortRoleInfo> classify_ports(const TopoIndex& idx, double theta_frac = 0.10);

// Feasible action interval at a decision point, from the observation alone.
std::int64_t feasible_low(const Observation& o);
std::int64_t feasible_high(const Observation& o);

// Uniform draw over the clamped feasible interval.
class RandomPolicy : public Policy {
 public:
  RepositionAction act(Simulator& sim, const DecisionPoint& d, Rng& rng) override;
};

// Discharge the upper half of empties aboard at exporting ports, load the
// upper half of what fits at importing ports, do nothing at balanced ports.
class HeurPolicy : public Policy {
 public:
  explicit HeurPolicy(std::vector<PortRoleInfo> roles) : roles_(std::move(roles)) {}
  RepositionAction act(Simulator& sim, const DecisionPoint& d, Rng& rng) override;

 private:
  std::vector<PortRoleInfo> roles_;
};

// Replays a fixed plan; calls beyond the plan get delta 0. Tracks how often
// the simulator clamped a planned move.
class PlanExecutor : public Policy {
 public:
  void install(Plan plan);
  void begin_episode(Simulator& sim) override;
  RepositionAction act(Simulator& sim, const DecisionPoint& d, Rng& rng) override;
  void on_applied(const DecisionPoint& d, std::int64_t requested, std::int64_t applied) override;

  std::int64_t clamp_divergences() const { return divergences_; }
  const Plan& plan() const { return plan_; }

 protected:
  Plan plan_;
  std::vector<std::int64_t> next_ordinal_;
  std::int64_t divergences_ = 0;
};

}  // namespace ccecr

#endif  // CCECR_CORE_POLICIES_HPP
