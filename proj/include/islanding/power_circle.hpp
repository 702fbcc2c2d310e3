#pragma once

#include <span>
#include <string>
#include <vector>

#include "islanding/grid_model.hpp"
#include "islanding/reachability.hpp"

namespace islanding {

/// The set of buses one or more pooled DGs can feed.
struct SupplyRegion {
  std::vector<std::string> dgs;
  std::vector<BusId> root_buses;  // expansion origins, ascending
  double capacity = 0.0;          // kW, pooled stable output
  std::vector<BusId> members;     // ascending, includes every root
  double committed_load = 0.0;    // kW, rounded-up load of admitted members
  double surplus = 0.0;           // capacity - committed_load
  /// Roots whose own load exceeded the capacity. They stay members (an
  /// island must contain its source) but their load is not committed.
  std::vector<BusId> unserved_roots;
  /// Buses that must be energized, filled in by region_correction.
  std::vector<BusId> committed;

  bool contains(BusId id) const;
};

/// Predicted output minus one standard deviation, clamped at zero and
/// rounded down to the granularity.
double stable_output(const DistributedGenerator& dg, double granularity = 1.0);

/// Breadth-first capacity-bounded growth from `origin`.
///
/// Ring k + 1 is every unvisited closed-branch neighbour of the buses
/// admitted in ring k. Within a ring, buses are tried by descending weight,
/// then descending load, then ascending id, and each is admitted iff its
/// rounded-up load fits in what is left. A rejected bus blocks its
/// subtree. Growth stops when a ring admits nothing.
///
/// Throws std::invalid_argument if an origin bus does not exist or the
/// origins are not mutually reachable.
SupplyRegion expand_circle(const Network& net, std::span<const BusId> origin,
                           double capacity, double granularity = 1.0);

/// Repeatedly unions regions that share a bus (pooling DGs, roots and
/// capacity, counting shared load once), then regrows the union from its
/// boundary with the pooled surplus. Runs to a fixed point, so the result
/// is pairwise disjoint.
std::vector<SupplyRegion> merge_overlapping(const Network& net,
                                            std::vector<SupplyRegion> regions,
                                            double granularity = 1.0);

/// One circle per DG of `region`, then merge_overlapping.
std::vector<SupplyRegion> max_supply_regions(const Network& net,
                                             const ReachableRegion& region,
                                             double granularity = 1.0);

}  // namespace islanding
