#ifndef CCECR_CORE_ORCHESTRATOR_HPP
#define CCECR_CORE_ORCHESTRATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/algorithms.hpp"
#include "core/configurator.hpp"
#include "core/domain.hpp"
#include "core/search.hpp"

namespace ccecr {

// How the configure step finds a configuration. The rollout budget caps every
// method that scores candidates by simulation; lsnet consumes plan solves
// instead of rollouts, so only its GA knobs bound its work.
struct ConfigureOptions {
  std::string method = "rl-configurator";  // rl-configurator | lsnet | randomconf-best
  std::int64_t budget = 2000;              // total rollout cap
  int eval_episodes = 2;                   // rollouts per configuration evaluation
  double lsnet_noise = 0.2;                // forecast perturbation for the lsnet fitness
  GAParams ga;                             // lsnet GA knobs (seed overridden below)
  ConfiguratorHyper rl;                    // rl knobs (budget/episodes/seed overridden below)
  std::uint64_t seed = 1;
};

FleetConfiguration configure_step(const TopoIndex& idx, const AlgorithmSpec& cheap,
                                  const ConfigureOptions& opt);

// Mean and 95% half-width (t distribution, n - 1 degrees of freedom) of one
// value per evaluation seed. Requires at least two values.
struct SeedStats {
  double mean = 0.0;
  double ci95 = 0.0;
};
SeedStats seed_stats(const std::vector<double>& values);

struct CCResult {
  std::string label;
  FleetConfiguration config;
  AlgorithmSpec star;
  std::vector<double> per_seed;  // fulfillment_pct per evaluation seed
  double mean = 0.0;             // in [0, 100]
  double ci95 = 0.0;
  std::vector<std::uint64_t> eval_seeds;
  std::string configure_method;  // empty when the configuration was given
  double walltime_s = 0.0;
};

// Builds star's policy fresh for each of k_seeds rollouts under p and
// aggregates fulfillment. k_seeds < 2 is an error (no interval from one run).
CCResult conquer_step(const TopoIndex& idx, const FleetConfiguration& p,
                      const AlgorithmSpec& star, int k_seeds, std::uint64_t eval_seed);

// configure_step then conquer_step, labeled CC-<cheap>-<star>.
CCResult run_cc(const TopoIndex& idx, const AlgorithmSpec& cheap, const AlgorithmSpec& star,
                const ConfigureOptions& conf, int k_seeds, std::uint64_t eval_seed);

// One comparison-table row: a full pipeline to configure and evaluate.
struct ExperimentSpec {
  std::string kind = "cc";  // cc | lsnet | randomconf | ga-joint
  AlgorithmSpec cheap;      // cc only: the configure step's evaluator
  AlgorithmSpec star;       // evaluation policy (cc, lsnet, randomconf)
  ConfigureOptions conf;    // cc: as given; lsnet/randomconf: method is implied
  std::string label;        // optional override, default derived from kind
};

struct TableOptions {
  int k_seeds = 5;        // pipeline replicates per row, shared seeds across rows
  int eval_rollouts = 3;  // evaluation episodes per replicate
  std::uint64_t master_seed = 1;
};

struct TableRow {
  std::string label;
  std::vector<double> run_values;  // [k_seeds] mean fulfillment_pct per replicate
  double mean = 0.0;
  double ci95 = 0.0;
  double walltime_s = 0.0;
};

struct ComparisonTable {
  std::vector<TableRow> rows;
  std::vector<std::uint64_t> pipeline_seeds;
  std::size_t best_row = 0;  // by mean
};

// Each row runs k_seeds full pipelines on the same pipeline seeds; within a
// replicate every row trains from the same configure seed and is evaluated on
// the same worlds, so row differences are paired.
ComparisonTable compare_table(const TopoIndex& idx, const std::vector<ExperimentSpec>& rows,
                              const TableOptions& opt);

// Aligned text report; the best row's label is wrapped in ** **.
std::string table_text(const ComparisonTable& table);

// "row,mean,ci95,seeds,walltime_s". mask_walltime replaces the wall time with
// "-" so reruns can be compared byte for byte.
std::string table_csv(const ComparisonTable& table, bool mask_walltime);

}  // namespace ccecr

#endif  // CCECR_CORE_ORCHESTRATOR_HPP
