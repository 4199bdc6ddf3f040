#ifndef CCECR_CORE_EXACT_HPP
#define CCECR_CORE_EXACT_HPP

#include <cstdint>

#include "core/domain.hpp"

namespace ccecr {

// Exhaustive minimum total shortage over every feasible action sequence,
// found by forking the simulator at each decision point. Exponential in the
// number of decisions; meant for instances with a handful of calls and tiny
// capacities. seed is the raw simulator seed (pass derive_seed(s, 1) to match
// the world rollout(s) produces for master seed s).
std::int64_t exact_min_shortage(const TopoIndex& idx, const FleetConfiguration& p,
                                std::uint64_t seed);

}  // namespace ccecr

#endif  // CCECR_CORE_EXACT_HPP
