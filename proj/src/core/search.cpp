#include "core/search.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "core/planner.hpp"

namespace ccecr {

namespace {

// Per-vessel assignment gene. stop is a position within the route's stop
// list, so any (route, stop in range) pair decodes to a valid configuration.
struct Gene {
  int route = 0;
  int stop = 0;
};

Gene sample_gene(const TopoIndex& idx, Rng& rng) {
  Gene g;
  g.route = static_cast<int>(rng.uniform_int(0, idx.num_routes() - 1));
  const auto& stops = idx.route_stops(g.route);
  g.stop = static_cast<int>(rng.uniform_int(0, static_cast<std::int64_t>(stops.size()) - 1));
  return g;
}

void repair_gene(const TopoIndex& idx, Gene& g) {
  const int n = static_cast<int>(idx.route_stops(g.route).size());
  if (g.stop >= n) g.stop = n - 1;
  if (g.stop < 0) g.stop = 0;
}

FleetConfiguration decode_genes(const TopoIndex& idx, const std::vector<Gene>& genes) {
  const Topology& t = idx.topo();
  FleetConfiguration p;
  p.assignments.reserve(genes.size());
  for (size_t v = 0; v < genes.size(); ++v) {
    const Route& r = t.routes[genes[v].route];
    p.assignments.push_back({t.vessels[v].id, r.id, r.stops[genes[v].stop]});
  }
  return p;
}

std::vector<int> gene_key(const std::vector<Gene>& genes) {
  std::vector<int> k;
  k.reserve(genes.size() * 2);
  for (const Gene& g : genes) {
    k.push_back(g.route);
    k.push_back(g.stop);
  }
  return k;
}

// Index of the tournament winner: best fitness among `size` uniform draws,
// earlier draw winning ties.
size_t tournament_pick(const std::vector<double>& fit, int size, Rng& rng) {
  size_t best = static_cast<size_t>(rng.uniform_int(0, static_cast<std::int64_t>(fit.size()) - 1));
  for (int i = 1; i < size; ++i) {
    const size_t c =
        static_cast<size_t>(rng.uniform_int(0, static_cast<std::int64_t>(fit.size()) - 1));
    if (fit[c] > fit[best]) best = c;
  }
  return best;
}

// Indices of the top k by fitness, ties resolved toward lower index.
std::vector<size_t> top_k(const std::vector<double>& fit, int k) {
  std::vector<size_t> order(fit.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return fit[a] > fit[b]; });
  order.resize(static_cast<size_t>(k));
  return order;
}

GenerationStats population_stats(const std::vector<double>& fit) {
  GenerationStats s;
  s.best = *std::max_element(fit.begin(), fit.end());
  s.mean = std::accumulate(fit.begin(), fit.end(), 0.0) / static_cast<double>(fit.size());
  return s;
}

}  // namespace

void validate_ga_params(const GAParams& g) {
  if (g.population < 2) throw Error("ga params: population must be at least 2");
  if (g.generations < 0) throw Error("ga params: generations must be non-negative");
  if (g.tournament < 1) throw Error("ga params: tournament size must be at least 1");
  if (g.crossover < 0.0 || g.crossover > 1.0)
    throw Error("ga params: crossover rate must lie in [0, 1]");
  if (g.mutation < 0.0 || g.mutation > 1.0)
    throw Error("ga params: mutation rate must lie in [0, 1]");
  if (g.elitism < 1 || g.elitism >= g.population)
    throw Error("ga params: elitism must lie in [1, population)");
}

std::vector<FleetConfiguration> random_configurations(const TopoIndex& idx, int n, Rng& rng) {
  if (n < 1) throw Error("random_configurations: n must be at least 1");
  std::vector<FleetConfiguration> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<Gene> genes(static_cast<size_t>(idx.num_vessels()));
    for (Gene& g : genes) g = sample_gene(idx, rng);
    out.push_back(decode_genes(idx, genes));
  }
  return out;
}

std::string search_history_csv(const std::vector<GenerationStats>& history) {
  std::ostringstream os;
  os << "generation,best,mean\n";
  for (size_t g = 0; g < history.size(); ++g)
    os << g << ',' << history[g].best << ',' << history[g].mean << '\n';
  return os.str();
}

SearchResult ga_search_configs(const TopoIndex& idx, const ConfigFitness& fitness,
                               const GAParams& params) {
  validate_ga_params(params);
  Rng rng(params.seed);
  const int nv = idx.num_vessels();

  SearchResult res;
  std::map<std::vector<int>, double> cache;
  auto score = [&](const std::vector<Gene>& genes) {
    auto key = gene_key(genes);
    auto it = cache.find(key);
    if (it != cache.end()) {
      ++res.fitness_hits;
      return it->second;
    }
    const double f = fitness(decode_genes(idx, genes));
    cache.emplace(std::move(key), f);
    ++res.fitness_evals;
    return f;
  };

  std::vector<std::vector<Gene>> pop(static_cast<size_t>(params.population));
  for (auto& genes : pop) {
    genes.resize(static_cast<size_t>(nv));
    for (Gene& g : genes) g = sample_gene(idx, rng);
  }
  std::vector<double> fit(pop.size());
  for (size_t i = 0; i < pop.size(); ++i) fit[i] = score(pop[i]);

  size_t best_i = static_cast<size_t>(
      std::max_element(fit.begin(), fit.end()) - fit.begin());
  std::vector<Gene> best_genes = pop[best_i];
  res.best_fitness = fit[best_i];
  res.history.push_back(population_stats(fit));

  for (int gen = 0; gen < params.generations; ++gen) {
    std::vector<std::vector<Gene>> next;
    next.reserve(pop.size());
    for (size_t e : top_k(fit, params.elitism)) next.push_back(pop[e]);
    while (next.size() < pop.size()) {
      const size_t a = tournament_pick(fit, params.tournament, rng);
      const size_t b = tournament_pick(fit, params.tournament, rng);
      std::vector<Gene> child = pop[a];
      if (nv >= 2 && rng.u01() < params.crossover) {
        const int cut = static_cast<int>(rng.uniform_int(1, nv - 1));
        for (int i = cut; i < nv; ++i) child[static_cast<size_t>(i)] = pop[b][static_cast<size_t>(i)];
      }
      for (Gene& g : child) {
        if (rng.u01() < params.mutation) g = sample_gene(idx, rng);
        repair_gene(idx, g);
      }
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    for (size_t i = 0; i < pop.size(); ++i) fit[i] = score(pop[i]);
    const size_t gi = static_cast<size_t>(
        std::max_element(fit.begin(), fit.end()) - fit.begin());
    if (fit[gi] > res.best_fitness) {
      res.best_fitness = fit[gi];
      best_genes = pop[gi];
    }
    res.history.push_back(population_stats(fit));
  }

  res.best = decode_genes(idx, best_genes);
  return res;
}

SearchResult ls_net(const TopoIndex& idx, const GAParams& params, double noise_level) {
  // One forecast seed for every candidate: fitness is deterministic and the
  // whole search answers to the same (possibly wrong) picture of the future.
  const std::uint64_t forecast_seed = derive_seed(params.seed, 101);
  return ga_search_configs(
      idx,
      [&](const FleetConfiguration& p) {
        return static_cast<double>(plan_objective(idx, p, forecast_seed, noise_level));
      },
      params);
}

void MatrixPolicy::begin_episode(Simulator& sim) {
  calls_seen_.assign(static_cast<size_t>(sim.index().num_vessels()), 0);
}

RepositionAction MatrixPolicy::act(Simulator& sim, const DecisionPoint& d, Rng& rng) {
  (void)sim;
  (void)rng;
  const size_t v = static_cast<size_t>(d.vessel);
  if (v >= calls_seen_.size()) return {0};
  const std::int64_t j = calls_seen_[v]++;
  if (v >= cells_.size() || j >= static_cast<std::int64_t>(cells_[v].size())) return {0};
  const double f = std::clamp(cells_[v][static_cast<size_t>(j)], -1.0, 1.0);
  const Observation& o = d.obs;
  if (f >= 0.0) {
    const std::int64_t hi = std::min({o.port_stock, o.vessel_free, o.handling_cap});
    return {std::llround(f * static_cast<double>(hi))};
  }
  const std::int64_t room = o.port_capacity - o.port_stock;
  const std::int64_t lo = std::min({o.vessel_empties, room, o.handling_cap});
  return {std::llround(f * static_cast<double>(lo))};
}

namespace {

// Joint genome: nv assignment genes followed by an nv x ncalls action matrix,
// crossed over and mutated as one concatenated string.
struct JointGenome {
  std::vector<Gene> genes;
  std::vector<std::vector<double>> cells;
};

JointGenome sample_joint(const TopoIndex& idx, std::int64_t ncalls, Rng& rng) {
  JointGenome j;
  j.genes.resize(static_cast<size_t>(idx.num_vessels()));
  for (Gene& g : j.genes) g = sample_gene(idx, rng);
  j.cells.assign(j.genes.size(), std::vector<double>(static_cast<size_t>(ncalls)));
  for (auto& row : j.cells)
    for (double& c : row) c = rng.uniform(-1.0, 1.0);
  return j;
}

}  // namespace

JointResult ga_joint(const TopoIndex& idx, const GAParams& params, int eval_episodes) {
  validate_ga_params(params);
  if (eval_episodes < 1) throw Error("ga_joint: eval_episodes must be at least 1");
  Rng rng(params.seed);
  const int nv = idx.num_vessels();
  // Travel times are floored at one day, so no vessel can make more than one
  // call per day: horizon rows of actions cover every reachable call.
  const std::int64_t ncalls = idx.topo().horizon;
  const std::int64_t len = nv + nv * ncalls;  // concatenated genome length

  JointResult res;
  // Seeds fixed across genomes: fitness differences come from the genome, not
  // from which worlds it happened to be scored on.
  std::vector<std::uint64_t> eval_seeds(static_cast<size_t>(eval_episodes));
  for (size_t e = 0; e < eval_seeds.size(); ++e)
    eval_seeds[e] = derive_seed(params.seed, 7000 + e);

  auto score = [&](const JointGenome& g) {
    const FleetConfiguration p = decode_genes(idx, g.genes);
    MatrixPolicy policy(g.cells);
    double sum = 0.0;
    for (std::uint64_t s : eval_seeds) sum += rollout(idx, p, policy, s).fulfillment_pct;
    res.rollouts_used += eval_seeds.size();
    return sum / static_cast<double>(eval_seeds.size());
  };

  std::vector<JointGenome> pop(static_cast<size_t>(params.population));
  for (auto& g : pop) g = sample_joint(idx, ncalls, rng);
  std::vector<double> fit(pop.size());
  for (size_t i = 0; i < pop.size(); ++i) fit[i] = score(pop[i]);

  size_t best_i = static_cast<size_t>(
      std::max_element(fit.begin(), fit.end()) - fit.begin());
  JointGenome best = pop[best_i];
  double best_fit = fit[best_i];
  res.history.push_back(population_stats(fit));

  for (int gen = 0; gen < params.generations; ++gen) {
    std::vector<JointGenome> next;
    std::vector<double> next_fit;
    next.reserve(pop.size());
    next_fit.reserve(pop.size());
    // Elites carry their fitness: deterministic scoring makes re-evaluation
    // pure waste.
    for (size_t e : top_k(fit, params.elitism)) {
      next.push_back(pop[e]);
      next_fit.push_back(fit[e]);
    }
    while (next.size() < pop.size()) {
      const size_t a = tournament_pick(fit, params.tournament, rng);
      const size_t b = tournament_pick(fit, params.tournament, rng);
      JointGenome child = pop[a];
      if (len >= 2 && rng.u01() < params.crossover) {
        const std::int64_t cut = rng.uniform_int(1, len - 1);
        for (std::int64_t i = cut; i < len; ++i) {
          if (i < nv) {
            child.genes[static_cast<size_t>(i)] = pop[b].genes[static_cast<size_t>(i)];
          } else {
            const std::int64_t k = i - nv;
            child.cells[static_cast<size_t>(k / ncalls)][static_cast<size_t>(k % ncalls)] =
                pop[b].cells[static_cast<size_t>(k / ncalls)][static_cast<size_t>(k % ncalls)];
          }
        }
      }
      for (Gene& g : child.genes) {
        if (rng.u01() < params.mutation) g = sample_gene(idx, rng);
        repair_gene(idx, g);
      }
      for (auto& row : child.cells)
        for (double& c : row)
          if (rng.u01() < params.mutation) c = rng.uniform(-1.0, 1.0);
      next.push_back(std::move(child));
      next_fit.push_back(score(next.back()));
    }
    pop = std::move(next);
    fit = std::move(next_fit);
    const size_t gi = static_cast<size_t>(
        std::max_element(fit.begin(), fit.end()) - fit.begin());
    if (fit[gi] > best_fit) {
      best_fit = fit[gi];
      best = pop[gi];
    }
    res.history.push_back(population_stats(fit));
  }

  res.config = decode_genes(idx, best.genes);
  res.policy_cells = best.cells;
  res.fulfillment = best_fit;
  return res;
}

}  // namespace ccecr
