#ifndef CCECR_CORE_TOPO_GEN_HPP
#define CCECR_CORE_TOPO_GEN_HPP

#include <cstdint>

#include "core/domain.hpp"

namespace ccecr {

// Bundled reference topologies. All pass validate_topology.

// 4 ports, 2 routes, 3 vessels, 60 days. Small enough for exhaustive
// experiments, imbalanced enough that repositioning matters.
Topology desk_topology();

// 2 disjoint two-port routes, 4 vessels, every demand pair on route A.
// Assigning vessels to route B wastes them, so configuration search has a
// known optimum: majority (ideally all) of the fleet on A.
Topology planted_topology();

// Synthetic stand-ins matching published instance shapes only by their
// counts: variant 1 = 22 ports / 13 routes / 46 vessels / 400 days,
// variant 2 = 22 ports / 6 routes / 46 vessels / 200 days. Everything else
// (caps, legs, demand) is drawn from the seed.
Topology wwt_shaped_topology(int variant, std::uint64_t seed);

}  // namespace ccecr

#endif  // CCECR_CORE_TOPO_GEN_HPP
