#include "core/exact.hpp"

#include <limits>

#include "core/policies.hpp"
#include "core/sim.hpp"

namespace ccecr {

namespace {

void search(Simulator& sim, std::int64_t& best) {
  // Shortage only accumulates, so a branch already at the incumbent is dead.
  if (sim.metrics().total_shortage >= best) return;
  auto d = sim.next_decision();
  if (!d) {
    best = std::min(best, sim.metrics().total_shortage);
    return;
  }
  const std::int64_t lo = feasible_low(d->obs);
  const std::int64_t hi = feasible_high(d->obs);
  for (std::int64_t delta = lo; delta <= hi; ++delta) {
    Simulator child = sim;
    child.apply_action(*d, {delta});
    search(child, best);
  }
}

}  // namespace

std::int64_t exact_min_shortage(const TopoIndex& idx, const FleetConfiguration& p,
                                std::uint64_t seed) {
  Simulator sim(idx, p, seed);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  search(sim, best);
  return best;
}

}  // namespace ccecr
