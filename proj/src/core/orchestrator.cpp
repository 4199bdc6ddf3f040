#include "core/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "core/sim.hpp"

namespace ccecr {

namespace {

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Two-sided 95% t quantiles; df beyond the table fall back to the normal.
double t_quantile_95(int df) {
  static constexpr double kTable[30] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) throw Error("t quantile: degrees of freedom must be positive");
  if (df <= 30) return kTable[df - 1];
  if (df <= 40) return 2.021;
  if (df <= 60) return 2.000;
  if (df <= 120) return 1.980;
  return 1.960;
}

// One policy evaluation episode; the policy is rebuilt per seed so paired
// rows see identical worlds and identically seeded policy randomness.
double eval_episode(const TopoIndex& idx, const FleetConfiguration& p, const AlgorithmSpec& star,
                    std::uint64_t seed) {
  auto pol = make_algorithm(idx, star, derive_seed(seed, 3));
  return rollout(idx, p, *pol, seed).fulfillment_pct;
}

}  // namespace

SeedStats seed_stats(const std::vector<double>& values) {
  if (values.size() < 2) throw Error("seed stats: need at least 2 values for an interval");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, t_quantile_95(static_cast<int>(values.size()) - 1) * sd / std::sqrt(n)};
}

FleetConfiguration configure_step(const TopoIndex& idx, const AlgorithmSpec& cheap,
                                  const ConfigureOptions& opt) {
  if (opt.budget < 1) throw Error("configure step: budget must be at least 1");
  if (opt.eval_episodes < 1) throw Error("configure step: eval_episodes must be at least 1");

  if (opt.method == "rl-configurator") {
    ConfiguratorHyper hyper = opt.rl;
    hyper.max_rollouts = opt.budget;
    hyper.eval_episodes = opt.eval_episodes;
    hyper.seed = opt.seed;
    auto [pol, report] = train_configurator(idx, cheap, hyper);
    return extract_best_configuration(report);
  }
  if (opt.method == "lsnet") {
    GAParams ga = opt.ga;
    ga.seed = opt.seed;
    return ls_net(idx, ga, opt.lsnet_noise).best;
  }
  if (opt.method == "randomconf-best") {
    const int n = std::max<std::int64_t>(1, opt.budget / opt.eval_episodes);
    Rng rng(derive_seed(opt.seed, 20));
    auto candidates = random_configurations(idx, n, rng);
    ConfigEvaluator eval(idx, cheap, opt.eval_episodes, derive_seed(opt.seed, 21));
    size_t best = 0;
    double best_r = -1.0;
    for (size_t i = 0; i < candidates.size(); ++i) {
      const double r = eval.evaluate(candidates[i]);
      if (r > best_r) {
        best_r = r;
        best = i;
      }
    }
    return candidates[best];
  }
  throw Error("configure step: unknown method '" + opt.method + "'");
}

CCResult conquer_step(const TopoIndex& idx, const FleetConfiguration& p,
                      const AlgorithmSpec& star, int k_seeds, std::uint64_t eval_seed) {
  if (k_seeds < 2) throw Error("conquer step: need at least 2 evaluation seeds");
  const auto report = validate_configuration(idx.topo(), p);
  if (!report.ok) throw Error("conquer step: invalid configuration: " + report.to_string());

  const auto t0 = std::chrono::steady_clock::now();
  CCResult res;
  res.label = algorithm_label(star);
  res.config = p;
  res.star = star;
  for (int i = 0; i < k_seeds; ++i) {
    const std::uint64_t s = derive_seed(eval_seed, static_cast<std::uint64_t>(i));
    res.eval_seeds.push_back(s);
    res.per_seed.push_back(eval_episode(idx, p, star, s));
  }
  const SeedStats st = seed_stats(res.per_seed);
  res.mean = st.mean;
  res.ci95 = st.ci95;
  res.walltime_s = elapsed_s(t0);
  return res;
}

CCResult run_cc(const TopoIndex& idx, const AlgorithmSpec& cheap, const AlgorithmSpec& star,
                const ConfigureOptions& conf, int k_seeds, std::uint64_t eval_seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const FleetConfiguration p = configure_step(idx, cheap, conf);
  CCResult res = conquer_step(idx, p, star, k_seeds, eval_seed);
  res.label = "CC-" + algorithm_label(cheap) + "-" + algorithm_label(star);
  res.configure_method = conf.method;
  res.walltime_s = elapsed_s(t0);
  return res;
}

namespace {

std::string default_row_label(const ExperimentSpec& row) {
  if (row.kind == "cc")
    return "CC-" + algorithm_label(row.cheap) + "-" + algorithm_label(row.star);
  if (row.kind == "lsnet") return "LS-NET+" + algorithm_label(row.star);
  if (row.kind == "randomconf") return "RandomConf-" + algorithm_label(row.star);
  if (row.kind == "ga-joint") return "GA joint";
  throw Error("compare table: unknown row kind '" + row.kind + "'");
}

// One pipeline replicate for one row: configure (or evolve) from conf_seed,
// then average evaluation episodes on the shared seeds.
double run_replicate(const TopoIndex& idx, const ExperimentSpec& row, std::uint64_t conf_seed,
                     const std::vector<std::uint64_t>& eval_seeds) {
  if (row.kind == "ga-joint") {
    GAParams ga = row.conf.ga;
    ga.seed = conf_seed;
    const JointResult jr = ga_joint(idx, ga, row.conf.eval_episodes);
    double sum = 0.0;
    for (std::uint64_t s : eval_seeds) {
      MatrixPolicy pol(jr.policy_cells);
      sum += rollout(idx, jr.config, pol, s).fulfillment_pct;
    }
    return sum / static_cast<double>(eval_seeds.size());
  }

  FleetConfiguration p;
  if (row.kind == "cc") {
    ConfigureOptions conf = row.conf;
    conf.seed = conf_seed;
    p = configure_step(idx, row.cheap, conf);
  } else if (row.kind == "lsnet") {
    GAParams ga = row.conf.ga;
    ga.seed = conf_seed;
    p = ls_net(idx, ga, row.conf.lsnet_noise).best;
  } else if (row.kind == "randomconf") {
    Rng rng(derive_seed(conf_seed, 20));
    p = random_configurations(idx, 1, rng)[0];
  } else {
    throw Error("compare table: unknown row kind '" + row.kind + "'");
  }

  double sum = 0.0;
  for (std::uint64_t s : eval_seeds) sum += eval_episode(idx, p, row.star, s);
  return sum / static_cast<double>(eval_seeds.size());
}

}  // namespace

ComparisonTable compare_table(const TopoIndex& idx, const std::vector<ExperimentSpec>& rows,
                              const TableOptions& opt) {
  if (rows.empty()) throw Error("compare table: need at least 1 row");
  if (opt.k_seeds < 2) throw Error("compare table: need at least 2 pipeline seeds");
  if (opt.eval_rollouts < 1) throw Error("compare table: need at least 1 evaluation rollout");

  ComparisonTable table;
  for (int r = 0; r < opt.k_seeds; ++r)
    table.pipeline_seeds.push_back(derive_seed(opt.master_seed, static_cast<std::uint64_t>(r)));

  for (const ExperimentSpec& row : rows) {
    const auto t0 = std::chrono::steady_clock::now();
    TableRow out;
    out.label = row.label.empty() ? default_row_label(row) : row.label;
    for (std::uint64_t ps : table.pipeline_seeds) {
      std::vector<std::uint64_t> eval_seeds;
      for (int e = 0; e < opt.eval_rollouts; ++e)
        eval_seeds.push_back(derive_seed(ps, 2 + static_cast<std::uint64_t>(e)));
      out.run_values.push_back(run_replicate(idx, row, derive_seed(ps, 1), eval_seeds));
    }
    const SeedStats st = seed_stats(out.run_values);
    out.mean = st.mean;
    out.ci95 = st.ci95;
    out.walltime_s = elapsed_s(t0);
    table.rows.push_back(std::move(out));
  }

  table.best_row = 0;
  for (size_t i = 1; i < table.rows.size(); ++i)
    if (table.rows[i].mean > table.rows[table.best_row].mean) table.best_row = i;
  return table;
}

std::string table_text(const ComparisonTable& table) {
  std::vector<std::string> labels;
  size_t width = 0;
  for (size_t i = 0; i < table.rows.size(); ++i) {
    std::string l = table.rows[i].label;
    if (i == table.best_row) l = "**" + l + "**";
    width = std::max(width, l.size());
    labels.push_back(std::move(l));
  }

  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << std::left << std::setw(static_cast<int>(width)) << "row"
     << "  fulfillment_pct\n";
  for (size_t i = 0; i < table.rows.size(); ++i) {
    os << std::left << std::setw(static_cast<int>(width)) << labels[i] << "  "
       << table.rows[i].mean << " +/- " << table.rows[i].ci95 << '\n';
  }
  return os.str();
}

std::string table_csv(const ComparisonTable& table, bool mask_walltime) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << "row,mean,ci95,seeds,walltime_s\n";
  for (const TableRow& r : table.rows) {
    os << r.label << ',' << r.mean << ',' << r.ci95 << ',' << table.pipeline_seeds.size() << ',';
    if (mask_walltime) {
      os << '-';
    } else {
      os << r.walltime_s;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace ccecr
