#ifndef CCECR_CORE_PLAN_HPP
#define CCECR_CORE_PLAN_HPP

#include <cstdint>
#include <vector>

namespace ccecr {

// A repositioning plan keyed by (vessel, call ordinal). Ordinal 0 is the
// vessel's first call at or after the plan epoch.
struct Plan {
  std::vector<std::vector<std::int64_t>> moves;  // [vessel][ordinal], +load/-discharge
  std::int64_t planned_served = 0;
  std::int64_t planned_demand = 0;
  std::int64_t planned_shortage = 0;  // planned_demand - planned_served
  std::int64_t epoch_day = 0;
  std::int64_t window_end = 0;  // exclusive
};

}  // namespace ccecr

#endif  // CCECR_CORE_PLAN_HPP
