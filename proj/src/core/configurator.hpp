#ifndef CCECR_CORE_CONFIGURATOR_HPP
#define CCECR_CORE_CONFIGURATOR_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "core/algorithms.hpp"
#include "core/domain.hpp"
#include "core/mlp.hpp"

namespace ccecr {

// Construction-MDP state: one vessel assignment per step, terminal when all
// vessels are assigned. Unassigned vessels carry -1, never a fake id.
struct ConfState {
  int step = 0;
  std::vector<int> route_of;  // per vessel, -1 = unassigned
  std::vector<int> port_of;   // per vessel start port, -1 = unassigned
};

struct ConfTriple {
  int vessel = -1;
  int route = -1;
  int port = -1;
  bool operator==(const ConfTriple&) const = default;
};

ConfState config_mdp_reset(const TopoIndex& idx);
bool conf_state_terminal(const TopoIndex& idx, const ConfState& s);

// Share of mean daily demand servable by each route alone (both endpoints
// among its stops); sums to 1, or all zeros without demand.
std::vector<double> route_demand_share(const TopoIndex& idx);

// [per-route assigned count, per-route assigned capacity, step share,
// per-route demand share]; every entry normalized to [0, 1].
int config_feature_dim(const TopoIndex& idx);  // 3 * |E| + 1
std::vector<double> config_features(const TopoIndex& idx, const ConfState& s,
                                    const std::vector<double>& demand_share);
std::vector<double> config_features(const TopoIndex& idx, const ConfState& s);

// Records a feasible triple. Throws on infeasible input; the policy masks
// make such inputs unreachable from sampling.
ConfState conf_state_apply(const TopoIndex& idx, const ConfState& s, const ConfTriple& a);

// Terminal states only.
FleetConfiguration state_to_configuration(const TopoIndex& idx, const ConfState& s);

// Rollout-backed configuration evaluation: mean reward (fulfillment / 100)
// of the cheap algorithm over per-instance evaluation seeds shared by every
// configuration, cached so repeats cost nothing.
class ConfigEvaluator {
 public:
  ConfigEvaluator(const TopoIndex& idx, AlgorithmSpec cheap, int episodes_per_eval,
                  std::uint64_t seed);

  double evaluate(const FleetConfiguration& p);

  std::int64_t rollouts_used() const { return rollouts_used_; }
  std::int64_t cache_hits() const { return cache_hits_; }
  const AlgorithmSpec& cheap() const { return cheap_; }

 private:
  const TopoIndex* idx_;
  AlgorithmSpec cheap_;
  int episodes_;
  std::uint64_t seed_;
  std::int64_t rollouts_used_ = 0;
  std::int64_t cache_hits_ = 0;
  std::map<std::string, double> cache_;
};

// (next state, reward): zero until the final assignment, then the completed
// configuration's evaluation.
std::pair<ConfState, double> config_mdp_step(const TopoIndex& idx, ConfigEvaluator& eval,
                                             const ConfState& s, const ConfTriple& a);

// Masked autoregressive policy over assignment triples: a shared tanh
// embedding of the state features and three logit heads sampled in the
// order route, then port (masked to the route's stops), then vessel (masked
// to unassigned). Later heads see earlier picks as one-hot inputs, so the
// action space costs |E| + |H| + |V| logits instead of |E| * |H| * |V|.
class ConfiguratorPolicy {
 public:
  ConfiguratorPolicy(const TopoIndex& idx, int hidden, int embed, std::uint64_t init_seed);

  struct Sample {
    ConfTriple triple;
    double logp = 0.0;    // sum of the three head log-probabilities
    double entropy = 0.0;  // sum of the three head entropies
  };
  Sample sample(const ConfState& s, Rng& rng) const;
  Sample greedy(const ConfState& s) const;  // per-head argmax decode
  FleetConfiguration greedy_configuration() const;

  struct Eval {
    double logp = 0.0;
    double entropy = 0.0;
  };
  Eval evaluate(const ConfState& s, const ConfTriple& a) const;
  // Full head distributions at a fixed pick, for tests and diagnostics.
  struct HeadProbs {
    std::vector<double> route, port, vessel;
  };
  HeadProbs head_probs(const ConfState& s, const ConfTriple& a) const;
  // Same forward pass, then accumulates
  // d(coef_logp * logp + coef_ent * entropy) / d(params) into the gradient
  // buffer. Head normalization guarantees masked probabilities are exact 0.
  Eval evaluate_with_grad(const ConfState& s, const ConfTriple& a, double coef_logp,
                          double coef_ent);

  int num_params() const { return bank_.size(); }
  std::vector<double>& params() { return bank_.params; }
  const std::vector<double>& params() const { return bank_.params; }
  const std::vector<double>& grads() const { return bank_.grads; }
  void zero_grads() { bank_.zero_grads(); }

  int route_logits() const { return route_head_.out; }
  int port_logits() const { return port_head_.out; }
  int vessel_logits() const { return vessel_head_.out; }

  // Checkpoint: versioned JSON with the topology fingerprint, layer shapes
  // and the flat parameter vector. load rejects mismatched topologies.
  void save(const std::string& path) const;
  static ConfiguratorPolicy load(const std::string& path, const TopoIndex& idx);

  const TopoIndex& index() const { return *idx_; }

 private:
  struct Pass;  // forward activations for one state
  void forward_heads(const ConfState& s, Pass& pass, const ConfTriple* fixed, Rng* rng,
                     bool greedy) const;

  const TopoIndex* idx_;
  int hidden_;
  int embed_;
  std::vector<double> demand_share_;
  ParamBank bank_;
  Mlp embed_net_;
  Linear route_head_, port_head_, vessel_head_;
};

struct TrainIterStats {
  double mean_reward = 0.0;
  double best_reward = 0.0;  // best over everything evaluated so far
  double entropy = 0.0;      // mean summed head entropy at sampling time
  double grad_norm = 0.0;    // L2 norm of the last surrogate gradient
};

struct TrainReport {
  std::vector<TrainIterStats> iters;
  bool has_best = false;
  FleetConfiguration best_config;
  double best_reward = 0.0;
  int best_iteration = -1;  // earliest iteration that reached best_reward
  std::int64_t rollouts_used = 0;
  std::int64_t configs_evaluated = 0;  // distinct configurations
};

struct ConfiguratorHyper {
  int iterations = 50;
  int batch = 32;
  int epochs = 4;  // surrogate passes per batch
  double lr = 3e-3;
  double clip = 0.2;
  double entropy_coef = 0.01;
  int hidden = 64;
  int embed = 32;
  int eval_episodes = 2;          // rollouts per configuration evaluation
  std::int64_t max_rollouts = 0;  // 0 = unlimited; budget checked per episode
  std::uint64_t seed = 1;
};

// Clipped-surrogate policy gradient on the construction MDP. Rewards are
// terminal-only; the baseline is a running mean and batch advantages are
// variance-normalized. Throws if the mean reward turns non-finite.
std::pair<ConfiguratorPolicy, TrainReport> train_configurator(const TopoIndex& idx,
                                                              const AlgorithmSpec& cheap,
                                                              const ConfiguratorHyper& hyper);

// Argmax-by-evaluated-reward over everything seen in training, earliest
// discovery wins ties. Throws if nothing was evaluated.
FleetConfiguration extract_best_configuration(const TrainReport& report);

std::string training_curves_csv(const TrainReport& report);

}  // namespace ccecr

#endif  // CCECR_CORE_CONFIGURATOR_HPP
