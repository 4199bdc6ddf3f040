#include "core/configurator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "core/sim.hpp"
#include "core/topology_io.hpp"

namespace ccecr {

namespace {

std::string config_key(const TopoIndex& idx, const FleetConfiguration& p) {
  std::ostringstream key;
  for (const auto& ra : resolve_configuration(idx, p)) {
    key << ra.route << ':' << ra.start_port << ';';
  }
  return key.str();
}

}  // namespace

ConfState config_mdp_reset(const TopoIndex& idx) {
  ConfState s;
  s.route_of.assign(idx.num_vessels(), -1);
  s.port_of.assign(idx.num_vessels(), -1);
  return s;
}

bool conf_state_terminal(const TopoIndex& idx, const ConfState& s) {
  return s.step == idx.num_vessels();
}

std::vector<double> route_demand_share(const TopoIndex& idx) {
  const auto& pairs = idx.topo().order_model.pairs;
  const std::int64_t horizon = idx.topo().horizon;
  std::vector<double> share(idx.num_routes(), 0.0);
  double total = 0.0;
  for (size_t k = 0; k < pairs.size(); ++k) {
    double mean = 0.0;
    for (std::int64_t t = 0; t < horizon; ++t) mean += order_mean(pairs[k], t);
    mean /= static_cast<double>(std::max<std::int64_t>(1, horizon));
    const auto [o, d] = idx.pair_ports()[k];
    for (int e = 0; e < idx.num_routes(); ++e) {
      if (idx.route_contains(e, o) && idx.route_contains(e, d)) {
        share[e] += mean;
        total += mean;
      }
    }
  }
  if (total > 0.0) {
    for (double& v : share) v /= total;
  }
  return share;
}

int config_feature_dim(const TopoIndex& idx) { return 3 * idx.num_routes() + 1; }

std::vector<double> config_features(const TopoIndex& idx, const ConfState& s,
                                    const std::vector<double>& demand_share) {
  const int ne = idx.num_routes();
  const int nv = idx.num_vessels();
  std::vector<double> f;
  f.reserve(config_feature_dim(idx));

  std::vector<double> counts(ne, 0.0), caps(ne, 0.0);
  double total_cap = 0.0;
  for (const auto& v : idx.topo().vessels) total_cap += static_cast<double>(v.capacity);
  for (int v = 0; v < nv; ++v) {
    if (s.route_of[v] >= 0) {
      counts[s.route_of[v]] += 1.0;
      caps[s.route_of[v]] += static_cast<double>(idx.topo().vessels[v].capacity);
    }
  }
  for (int e = 0; e < ne; ++e) f.push_back(counts[e] / std::max(1, nv));
  for (int e = 0; e < ne; ++e) f.push_back(total_cap > 0.0 ? caps[e] / total_cap : 0.0);
  f.push_back(static_cast<double>(s.step) / std::max(1, nv));
  for (int e = 0; e < ne; ++e) f.push_back(demand_share[e]);
  return f;
}

std::vector<double> config_features(const TopoIndex& idx, const ConfState& s) {
  return config_features(idx, s, route_demand_share(idx));
}

ConfState conf_state_apply(const TopoIndex& idx, const ConfState& s, const ConfTriple& a) {
  if (conf_state_terminal(idx, s)) throw Error("conf_state_apply: state is terminal");
  if (a.vessel < 0 || a.vessel >= idx.num_vessels() || s.route_of[a.vessel] >= 0) {
    throw Error("conf_state_apply: vessel unavailable");
  }
  if (a.route < 0 || a.route >= idx.num_routes()) throw Error("conf_state_apply: bad route");
  if (a.port < 0 || a.port >= idx.num_ports() || !idx.route_contains(a.route, a.port)) {
    throw Error("conf_state_apply: start port not on route");
  }
  ConfState next = s;
  next.step += 1;
  next.route_of[a.vessel] = a.route;
  next.port_of[a.vessel] = a.port;
  return next;
}

FleetConfiguration state_to_configuration(const TopoIndex& idx, const ConfState& s) {
  if (!conf_state_terminal(idx, s)) throw Error("state_to_configuration: state not terminal");
  const Topology& t = idx.topo();
  FleetConfiguration p;
  for (int v = 0; v < idx.num_vessels(); ++v) {
    p.assignments.push_back(
        {t.vessels[v].id, t.routes[s.route_of[v]].id, t.ports[s.port_of[v]].id});
  }
  return p;
}

ConfigEvaluator::ConfigEvaluator(const TopoIndex& idx, AlgorithmSpec cheap, int episodes_per_eval,
                                 std::uint64_t seed)
    : idx_(&idx), cheap_(std::move(cheap)), episodes_(episodes_per_eval), seed_(seed) {
  if (episodes_ < 1) throw Error("ConfigEvaluator: episodes_per_eval must be >= 1");
}

double ConfigEvaluator::evaluate(const FleetConfiguration& p) {
  const std::string key = config_key(*idx_, p);
  if (auto it = cache_.find(key); it != cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  double sum = 0.0;
  for (int i = 0; i < episodes_; ++i) {
    // Episode seeds do not depend on the configuration: every configuration
    // faces the same worlds (paired evaluation).
    const std::uint64_t episode_seed = derive_seed(seed_, static_cast<std::uint64_t>(i));
    auto policy = make_algorithm(*idx_, cheap_, derive_seed(episode_seed, 3));
    sum += rollout(*idx_, p, *policy, episode_seed).fulfillment_pct / 100.0;
    ++rollouts_used_;
  }
  const double reward = sum / episodes_;
  cache_.emplace(key, reward);
  return reward;
}

std::pair<ConfState, double> config_mdp_step(const TopoIndex& idx, ConfigEvaluator& eval,
                                             const ConfState& s, const ConfTriple& a) {
  ConfState next = conf_state_apply(idx, s, a);
  double reward = 0.0;
  if (conf_state_terminal(idx, next)) reward = eval.evaluate(state_to_configuration(idx, next));
  return {std::move(next), reward};
}

// Forward activations of one three-head pass; kept so the backward pass can
// reuse them without recomputation.
struct ConfiguratorPolicy::Pass {
  Mlp::Cache embed;
  std::vector<double> zr, pr, ph_in, zh, ph, pv_in, zv, pv;
  std::vector<std::uint8_t> mr, mh, mv;
  ConfTriple picked;
  double logp = 0.0;
  double entropy = 0.0;
};

ConfiguratorPolicy::ConfiguratorPolicy(const TopoIndex& idx, int hidden, int embed,
                                       std::uint64_t init_seed)
    : idx_(&idx), hidden_(hidden), embed_(embed), demand_share_(route_demand_share(idx)) {
  if (hidden < 1 || embed < 1) throw Error("ConfiguratorPolicy: layer sizes must be >= 1");
  Rng rng(init_seed);
  const int ne = idx.num_routes();
  const int nh = idx.num_ports();
  embed_net_.init(bank_, config_feature_dim(idx), hidden, embed, /*bounded=*/true, rng);
  route_head_.init(bank_, embed, ne, rng);
  port_head_.init(bank_, embed + ne, nh, rng);
  vessel_head_.init(bank_, embed + ne + nh, idx.num_vessels(), rng);
}

namespace {

int pick_sampled(const std::vector<double>& probs, Rng& rng) {
  const double u = rng.u01();
  double acc = 0.0;
  int last = -1;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last = static_cast<int>(i);
    if (u < acc) return last;
  }
  return last;  // u landed in the rounding tail
}

int pick_greedy(const std::vector<double>& probs) {
  int best = -1;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0 && (best < 0 || probs[i] > probs[best])) best = static_cast<int>(i);
  }
  return best;
}

}  // namespace

void ConfiguratorPolicy::forward_heads(const ConfState& s, Pass& pass, const ConfTriple* fixed,
                                       Rng* rng, bool greedy) const {
  const TopoIndex& idx = *idx_;
  if (conf_state_terminal(idx, s)) throw Error("configurator: state is terminal");
  const int ne = idx.num_routes();
  const int nh = idx.num_ports();
  const int nv = idx.num_vessels();

  const std::vector<double> x = config_features(idx, s, demand_share_);
  embed_net_.forward(bank_, x.data(), pass.embed);
  const std::vector<double>& e = pass.embed.y;

  auto choose = [&](const std::vector<double>& probs, int forced) {
    if (fixed != nullptr) return forced;
    return greedy ? pick_greedy(probs) : pick_sampled(probs, *rng);
  };

  // Route head: any route admits a completion while a vessel is unassigned.
  pass.mr.assign(ne, 1);
  pass.zr.resize(ne);
  route_head_.forward(bank_, e.data(), pass.zr.data());
  masked_softmax(pass.zr, pass.mr, pass.pr);
  pass.picked.route = choose(pass.pr, fixed ? fixed->route : -1);
  if (pass.picked.route < 0 || pass.picked.route >= ne || pass.pr[pass.picked.route] <= 0.0) {
    throw Error("configurator: route choice has zero probability");
  }

  // Port head, masked to the chosen route's stops.
  pass.ph_in.assign(e.begin(), e.end());
  pass.ph_in.resize(embed_ + ne, 0.0);
  pass.ph_in[embed_ + pass.picked.route] = 1.0;
  pass.mh.assign(nh, 0);
  for (int h : idx.route_stops(pass.picked.route)) pass.mh[h] = 1;
  pass.zh.resize(nh);
  port_head_.forward(bank_, pass.ph_in.data(), pass.zh.data());
  masked_softmax(pass.zh, pass.mh, pass.ph);
  pass.picked.port = choose(pass.ph, fixed ? fixed->port : -1);
  if (pass.picked.port < 0 || pass.picked.port >= nh || pass.ph[pass.picked.port] <= 0.0) {
    throw Error("configurator: port choice has zero probability");
  }

  // Vessel head, masked to unassigned vessels.
  pass.pv_in.assign(pass.ph_in.begin(), pass.ph_in.end());
  pass.pv_in.resize(embed_ + ne + nh, 0.0);
  pass.pv_in[embed_ + ne + pass.picked.port] = 1.0;
  pass.mv.assign(nv, 0);
  for (int v = 0; v < nv; ++v) {
    if (s.route_of[v] < 0) pass.mv[v] = 1;
  }
  pass.zv.resize(nv);
  vessel_head_.forward(bank_, pass.pv_in.data(), pass.zv.data());
  masked_softmax(pass.zv, pass.mv, pass.pv);
  pass.picked.vessel = choose(pass.pv, fixed ? fixed->vessel : -1);
  if (pass.picked.vessel < 0 || pass.picked.vessel >= nv ||
      pass.pv[pass.picked.vessel] <= 0.0) {
    throw Error("configurator: vessel choice has zero probability");
  }

  pass.logp = std::log(pass.pr[pass.picked.route]) + std::log(pass.ph[pass.picked.port]) +
              std::log(pass.pv[pass.picked.vessel]);
  pass.entropy = probs_entropy(pass.pr) + probs_entropy(pass.ph) + probs_entropy(pass.pv);
}

ConfiguratorPolicy::Sample ConfiguratorPolicy::sample(const ConfState& s, Rng& rng) const {
  Pass pass;
  forward_heads(s, pass, nullptr, &rng, /*greedy=*/false);
  return {pass.picked, pass.logp, pass.entropy};
}

ConfiguratorPolicy::Sample ConfiguratorPolicy::greedy(const ConfState& s) const {
  Pass pass;
  forward_heads(s, pass, nullptr, nullptr, /*greedy=*/true);
  return {pass.picked, pass.logp, pass.entropy};
}

FleetConfiguration ConfiguratorPolicy::greedy_configuration() const {
  ConfState s = config_mdp_reset(*idx_);
  while (!conf_state_terminal(*idx_, s)) s = conf_state_apply(*idx_, s, greedy(s).triple);
  return state_to_configuration(*idx_, s);
}

ConfiguratorPolicy::Eval ConfiguratorPolicy::evaluate(const ConfState& s,
                                                      const ConfTriple& a) const {
  Pass pass;
  forward_heads(s, pass, &a, nullptr, false);
  return {pass.logp, pass.entropy};
}

ConfiguratorPolicy::HeadProbs ConfiguratorPolicy::head_probs(const ConfState& s,
                                                             const ConfTriple& a) const {
  Pass pass;
  forward_heads(s, pass, &a, nullptr, false);
  return {pass.pr, pass.ph, pass.pv};
}

ConfiguratorPolicy::Eval ConfiguratorPolicy::evaluate_with_grad(const ConfState& s,
                                                                const ConfTriple& a,
                                                                double coef_logp,
                                                                double coef_ent) {
  Pass pass;
  forward_heads(s, pass, &a, nullptr, false);

  std::vector<double> de(embed_, 0.0);

  std::vector<double> dzv(pass.zv.size(), 0.0);
  logprob_backward(pass.pv, a.vessel, coef_logp, dzv);
  entropy_backward(pass.pv, probs_entropy(pass.pv), coef_ent, dzv);
  std::vector<double> d_pv_in(pass.pv_in.size(), 0.0);
  vessel_head_.backward(bank_, pass.pv_in.data(), dzv.data(), d_pv_in.data());

  std::vector<double> dzh(pass.zh.size(), 0.0);
  logprob_backward(pass.ph, a.port, coef_logp, dzh);
  entropy_backward(pass.ph, probs_entropy(pass.ph), coef_ent, dzh);
  std::vector<double> d_ph_in(pass.ph_in.size(), 0.0);
  port_head_.backward(bank_, pass.ph_in.data(), dzh.data(), d_ph_in.data());

  std::vector<double> dzr(pass.zr.size(), 0.0);
  logprob_backward(pass.pr, a.route, coef_logp, dzr);
  entropy_backward(pass.pr, probs_entropy(pass.pr), coef_ent, dzr);
  route_head_.backward(bank_, pass.embed.y.data(), dzr.data(), de.data());

  // One-hot tails of the head inputs are discrete picks; only the embedding
  // slice propagates.
  for (int i = 0; i < embed_; ++i) de[i] += d_pv_in[i] + d_ph_in[i];
  embed_net_.backward(bank_, pass.embed, de.data(), nullptr);
  return {pass.logp, pass.entropy};
}

void ConfiguratorPolicy::save(const std::string& path) const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["kind"] = "configurator_checkpoint";
  j["topology_fingerprint"] = topology_fingerprint(idx_->topo());
  j["hidden"] = hidden_;
  j["embed"] = embed_;
  j["feature_dim"] = config_feature_dim(*idx_);
  j["num_routes"] = idx_->num_routes();
  j["num_ports"] = idx_->num_ports();
  j["num_vessels"] = idx_->num_vessels();
  j["params"] = bank_.params;
  write_file(path, j.dump(2) + "\n");
}

ConfiguratorPolicy ConfiguratorPolicy::load(const std::string& path, const TopoIndex& idx) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("checkpoint: bad JSON: ") + e.what());
  }
  if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1 ||
      j.value("kind", "") != "configurator_checkpoint") {
    throw Error("checkpoint: not a version-1 configurator checkpoint");
  }
  if (j["topology_fingerprint"].get<std::uint64_t>() != topology_fingerprint(idx.topo())) {
    throw Error("checkpoint: topology fingerprint mismatch");
  }
  ConfiguratorPolicy pol(idx, j["hidden"].get<int>(), j["embed"].get<int>(), 0);
  auto params = j["params"].get<std::vector<double>>();
  if (static_cast<int>(params.size()) != pol.num_params()) {
    throw Error("checkpoint: parameter count mismatch");
  }
  pol.bank_.params = std::move(params);
  return pol;
}

namespace {

struct EpisodeStep {
  ConfState state;
  ConfTriple triple;
  double logp_old = 0.0;
};

}  // namespace

std::pair<ConfiguratorPolicy, TrainReport> train_configurator(const TopoIndex& idx,
                                                              const AlgorithmSpec& cheap,
                                                              const ConfiguratorHyper& hyper) {
  ConfiguratorPolicy pol(idx, hyper.hidden, hyper.embed, derive_seed(hyper.seed, 10));
  ConfigEvaluator eval(idx, cheap, hyper.eval_episodes, derive_seed(hyper.seed, 11));
  Rng sample_rng(derive_seed(hyper.seed, 12));
  Adam opt(pol.num_params(), hyper.lr);
  TrainReport report;

  double baseline = 0.0;
  bool baseline_seen = false;

  for (int iter = 0; iter < hyper.iterations; ++iter) {
    if (hyper.max_rollouts > 0 && eval.rollouts_used() >= hyper.max_rollouts) break;

    std::vector<std::vector<EpisodeStep>> episodes;
    std::vector<double> rewards;
    double entropy_sum = 0.0;
    std::int64_t entropy_n = 0;
    for (int b = 0; b < hyper.batch; ++b) {
      if (b > 0 && hyper.max_rollouts > 0 && eval.rollouts_used() >= hyper.max_rollouts) break;
      std::vector<EpisodeStep> steps;
      ConfState s = config_mdp_reset(idx);
      while (!conf_state_terminal(idx, s)) {
        ConfiguratorPolicy::Sample smp = pol.sample(s, sample_rng);
        entropy_sum += smp.entropy;
        ++entropy_n;
        steps.push_back({s, smp.triple, smp.logp});
        s = conf_state_apply(idx, s, smp.triple);
      }
      const std::int64_t used_before = eval.rollouts_used();
      const double reward = eval.evaluate(state_to_configuration(idx, s));
      if (eval.rollouts_used() > used_before) ++report.configs_evaluated;
      if (!report.has_best || reward > report.best_reward) {
        report.has_best = true;
        report.best_reward = reward;
        report.best_config = state_to_configuration(idx, s);
        report.best_iteration = iter;
      }
      episodes.push_back(std::move(steps));
      rewards.push_back(reward);
    }
    if (episodes.empty()) break;

    const double mean_reward = std::accumulate(rewards.begin(), rewards.end(), 0.0) /
                               static_cast<double>(rewards.size());
    if (!std::isfinite(mean_reward)) {
      throw Error("train_configurator: diverged (non-finite mean reward)");
    }

    // Advantage: terminal reward against the running-mean baseline, then
    // batch-normalized so the step size is scale-free.
    const double base = baseline_seen ? baseline : mean_reward;
    std::vector<double> adv(rewards.size());
    for (size_t i = 0; i < rewards.size(); ++i) adv[i] = rewards[i] - base;
    double var = 0.0;
    for (double a : adv) var += a * a;
    const double sd = std::sqrt(var / static_cast<double>(adv.size()));
    if (sd > 1e-9) {
      for (double& a : adv) a /= sd;
    }
    baseline = baseline_seen ? 0.9 * baseline + 0.1 * mean_reward : mean_reward;
    baseline_seen = true;

    std::int64_t num_steps = 0;
    for (const auto& ep : episodes) num_steps += static_cast<std::int64_t>(ep.size());

    double grad_norm = 0.0;
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
      pol.zero_grads();
      for (size_t i = 0; i < episodes.size(); ++i) {
        for (const EpisodeStep& st : episodes[i]) {
          const double logp_new = pol.evaluate(st.state, st.triple).logp;
          const double ratio = std::exp(logp_new - st.logp_old);
          const double unclipped = ratio * adv[i];
          const double clipped =
              std::clamp(ratio, 1.0 - hyper.clip, 1.0 + hyper.clip) * adv[i];
          // d(min)/d(logp) is ratio * adv on the unclipped branch, 0 on the
          // clipped one; loss = -surrogate, hence the sign flips.
          const double coef =
              unclipped <= clipped ? ratio * adv[i] : 0.0;
          pol.evaluate_with_grad(st.state, st.triple,
                                 -coef / static_cast<double>(num_steps),
                                 -hyper.entropy_coef / static_cast<double>(num_steps));
        }
      }
      double norm = 0.0;
      for (double g : pol.grads()) norm += g * g;
      grad_norm = std::sqrt(norm);
      opt.step(pol.params(), pol.grads());
    }

    report.iters.push_back({mean_reward, report.best_reward,
                            entropy_n > 0 ? entropy_sum / entropy_n : 0.0, grad_norm});
  }
  report.rollouts_used = eval.rollouts_used();
  return {std::move(pol), std::move(report)};
}

FleetConfiguration extract_best_configuration(const TrainReport& report) {
  if (!report.has_best) throw Error("extract_best_configuration: no configurations evaluated");
  return report.best_config;
}

std::string training_curves_csv(const TrainReport& report) {
  std::ostringstream out;
  out << "iteration,mean_reward,best_reward,entropy\n";
  for (size_t i = 0; i < report.iters.size(); ++i) {
    const TrainIterStats& it = report.iters[i];
    out << i << ',' << it.mean_reward << ',' << it.best_reward << ',' << it.entropy << '\n';
  }
  return out.str();
}

}  // namespace ccecr
