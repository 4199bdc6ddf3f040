#ifndef CCECR_CORE_ALGORITHMS_HPP
#define CCECR_CORE_ALGORITHMS_HPP

#include <cstdint>
#include <memory>
#include <string>

#include "core/domain.hpp"
#include "core/sim.hpp"

namespace ccecr {

// Names a repositioning algorithm plus its knobs. tag picks the policy;
// the other fields apply where noted.
struct AlgorithmSpec {
  std::string tag = "rand";   // rand | heur | or | ori
  double theta = 0.10;        // heur: port-role threshold fraction
  double noise = 0.0;         // or/ori: forecast perturbation level
  std::int64_t window = 7;    // ori: replan period in days
  std::int64_t plan_len = 0;  // or/ori: plan length in days, 0 = full horizon
};

// Report label: Rand, Heur, OR, OR(I).
std::string algorithm_label(const AlgorithmSpec& spec);

// Builds the named policy. Planning policies seed their forecast stream from
// policy_seed; rand/heur instead draw from the rollout's policy stream.
// Throws on an unknown tag.
std::unique_ptr<Policy> make_algorithm(const TopoIndex& idx, const AlgorithmSpec& spec,
                                       std::uint64_t policy_seed);

}  // namespace ccecr

#endif  // CCECR_CORE_ALGORITHMS_HPP
