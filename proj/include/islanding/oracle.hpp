#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "islanding/grid_model.hpp"
#include "islanding/power_circle.hpp"

namespace islanding {

/// One optimal island: energized buses and the subset whose reducible load
/// is shed, both ascending.
struct EnumeratedIsland {
  std::vector<BusId> energized;
  std::vector<BusId> shed;

  friend bool operator==(const EnumeratedIsland&,
                         const EnumeratedIsland&) = default;
};

struct EnumerationResult {
  bool feasible = false;
  std::int64_t best_value_milli = 0;  // weighted kW x 1000
  double best_objective = 0.0;
  std::vector<EnumeratedIsland> best_sets;
  std::size_t states_explored = 0;
};

inline constexpr std::size_t kOracleMaxMembers = 20;

/// Exhaustive search over every connected energized set that contains the
/// roots, the paths between them and `region.committed`, and every shed
/// assignment on its controllable buses, keeping those within the rounded
/// capacity. Sets are generated by depth-first inclusion in a topological
/// order, so parent closure holds by construction.
///
/// Throws std::length_error above kOracleMaxMembers members.
EnumerationResult brute_force_partition(const Network& net,
                                        const SupplyRegion& region,
                                        double granularity = 1.0);

}  // namespace islanding
