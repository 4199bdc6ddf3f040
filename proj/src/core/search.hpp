#ifndef CCECR_CORE_SEARCH_HPP
#define CCECR_CORE_SEARCH_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "core/domain.hpp"
#include "core/rng.hpp"
#include "core/sim.hpp"

namespace ccecr {

struct GAParams {
  int population = 20;
  int generations = 50;
  int tournament = 3;
  double crossover = 0.9;
  double mutation = 0.1;
  int elitism = 2;  // >= 1 so per-generation best can never regress
  std::uint64_t seed = 1;
};

// Throws Error on population < 2, rates outside [0, 1], tournament < 1,
// elitism outside [1, population), or generations < 0.
void validate_ga_params(const GAParams& g);

// n independent configurations: per vessel, route uniform, start port uniform
// over that route's stops.
std::vector<FleetConfiguration> random_configurations(const TopoIndex& idx, int n, Rng& rng);

struct GenerationStats {
  double best = 0.0;
  double mean = 0.0;
};

// "generation,best,mean" with one row per entry, generation 0 first.
std::string search_history_csv(const std::vector<GenerationStats>& history);

struct SearchResult {
  FleetConfiguration best;
  double best_fitness = 0.0;
  std::vector<GenerationStats> history;  // [generations + 1], index 0 = initial population
  std::size_t fitness_evals = 0;         // distinct configurations scored (cache misses)
  std::size_t fitness_hits = 0;          // repeat configurations served from the cache
};

using ConfigFitness = std::function<double(const FleetConfiguration&)>;

// Maximizes fitness over configurations. Tournament selection, one-point
// crossover on the per-vessel gene string, per-gene mutation that resamples
// (route, start port) jointly, elitism. Fitness must be deterministic; calls
// are memoized per distinct configuration.
SearchResult ga_search_configs(const TopoIndex& idx, const ConfigFitness& fitness,
                               const GAParams& params);

// Configuration search scored by the planner, not by execution: fitness is
// the planned served demand under one fixed noisy forecast that every
// candidate shares. When that forecast diverges from realized demand the
// search optimizes toward the wrong configurations, which is the point of
// keeping it as a baseline.
SearchResult ls_net(const TopoIndex& idx, const GAParams& params, double noise_level);

// Deterministic repositioning policy read out of a gene matrix: cell [v][j]
// is vessel v's j-th call action as a signed fraction of the feasible range
// at that moment (+1 = load everything loadable, -1 = discharge everything
// dischargeable). Calls beyond the matrix do nothing.
class MatrixPolicy : public Policy {
 public:
  explicit MatrixPolicy(std::vector<std::vector<double>> cells) : cells_(std::move(cells)) {}
  void begin_episode(Simulator& sim) override;
  RepositionAction act(Simulator& sim, const DecisionPoint& d, Rng& rng) override;

  const std::vector<std::vector<double>>& cells() const { return cells_; }

 private:
  std::vector<std::vector<double>> cells_;
  std::vector<std::int64_t> calls_seen_;
};

struct JointResult {
  FleetConfiguration config;
  std::vector<std::vector<double>> policy_cells;  // [vessel][call ordinal]
  double fulfillment = 0.0;                       // mean fulfillment_pct of the best genome
  std::vector<GenerationStats> history;
  std::size_t rollouts_used = 0;
};

// Evolves (configuration, action matrix) jointly; fitness is the mean
// fulfillment over eval_episodes rollouts on seeds fixed across genomes, so
// comparisons are paired. The matrix spans horizon calls per vessel, the most
// any vessel can make.
JointResult ga_joint(const TopoIndex& idx, const GAParams& params, int eval_episodes);

}  // namespace ccecr

#endif  // CCECR_CORE_SEARCH_HPP
