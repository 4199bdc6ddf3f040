#include "core/algorithms.hpp"

#include "core/planner.hpp"
#include "core/policies.hpp"

namespace ccecr {

std::string algorithm_label(const AlgorithmSpec& spec) {
  if (spec.tag == "rand") return "Rand";
  if (spec.tag == "heur") return "Heur";
  if (spec.tag == "or") return "OR";
  if (spec.tag == "ori") return "OR(I)";
  throw Error("algorithm_label: unknown tag '" + spec.tag + "'");
}

std::unique_ptr<Policy> make_algorithm(const TopoIndex& idx, const AlgorithmSpec& spec,
                                       std::uint64_t policy_seed) {
  if (spec.tag == "rand") return std::make_unique<RandomPolicy>();
  if (spec.tag == "heur") return std::make_unique<HeurPolicy>(classify_ports(idx, spec.theta));
  const std::int64_t plan_len = spec.plan_len > 0 ? spec.plan_len : idx.topo().horizon;
  if (spec.tag == "or") return std::make_unique<OrPolicy>(spec.noise, policy_seed);
  if (spec.tag == "ori") {
    return std::make_unique<OriPolicy>(spec.window, plan_len, spec.noise, policy_seed);
  }
  throw Error("make_algorithm: unknown tag '" + spec.tag + "'");
}

}  // namespace ccecr
