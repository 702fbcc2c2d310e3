#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "islanding/grid_model.hpp"
#include "islanding/power_circle.hpp"
#include "islanding/rounding.hpp"

namespace islanding {

/// Split of a bus load into a part that may be shed and a part that may
/// not. Both parts are multiples of the granularity and sum to the
/// rounded-up load.
struct LoadSplit {
  BusId bus = 0;
  double reducible = 0.0;  // kW
  double fixed = 0.0;      // kW
  Units reducible_units = 0;
  Units fixed_units = 0;
};

struct RoundedPowers {
  double capacity = 0.0;
  std::map<BusId, double> loads;
};

/// Capacity rounded down and every load rounded up to the granularity.
RoundedPowers round_powers(const SupplyRegion& region,
                           const std::map<BusId, double>& loads,
                           double granularity);

/// The fixed part is the rounded-up uncontrollable share; the remainder of
/// the rounded-up load is reducible.
std::vector<LoadSplit> decompose_loads(const Network& net,
                                       const std::vector<BusId>& buses,
                                       double granularity = 1.0);

/// Hop-distance layering of a region from its roots.
struct LayeredRegion {
  std::vector<BusId> root_buses;
  std::vector<std::vector<BusId>> layers;  // layers[0] == root_buses
  std::map<BusId, BusId> parent;           // absent for roots

  std::size_t layer_of(BusId bus) const;
  /// `bus` followed by its ancestors up to and including a root.
  std::vector<BusId> path_to_root(BusId bus) const;
};

class DisconnectedRegionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Multi-source BFS over closed branches restricted to region members,
/// seeded with the roots in ascending order; a bus reachable from several
/// parents in the previous layer takes the first one discovered. Throws
/// DisconnectedRegionError if a member cannot be reached.
LayeredRegion bfs_layers(const Network& net, const SupplyRegion& region);

/// Buses on the tree paths joining the roots of a merged region. They must
/// all be energized for the pooled sources to form one island.
std::vector<BusId> root_connectors(const Network& net,
                                   const SupplyRegion& region);

/// Critical-load correction of a supply region. Fills `committed`:
///
///  1. every Primary bus and its path to the nearest root, provided the
///     committed loads fit once reducible parts are shed (lowest weight
///     first); otherwise Primary buses are dropped smallest load first and
///     dropped ones re-admitted while they still fit, leaving an
///     inclusion-maximal feasible Primary set;
///  2. all Secondary buses and their paths, if they fit at full load;
///  3. otherwise Secondary buses ring by ring, keeping a ring only while
///     the enlarged area fits and restores more weighted load than the
///     previously verified one.
///
/// Members stay in the region; uncommitted ones are left to the DP.
SupplyRegion region_correction(const Network& net, const SupplyRegion& region,
                               double granularity = 1.0);

/// A solved island.
struct Island {
  std::vector<std::string> dgs;
  std::vector<BusId> energized;         // ascending
  std::map<BusId, double> restored_kw;  // every energized bus
  std::map<BusId, double> shed_kw;      // buses whose reducible part is cut
  double objective = 0.0;               // weighted restored kW
  double capacity = 0.0;                // pooled rounded capacity, kW
  double served = 0.0;                  // rounded kW drawn against capacity

  /// Energized buses that actually receive power: fully shed buses that
  /// only pass power through are left out.
  std::vector<BusId> restored_buses() const;
};

class InfeasibleCommitmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Weighted value of serving `kw` at a bus of weight `weight`, in integer
/// thousandths so different summation orders compare exactly.
std::int64_t weighted_milli(int weight, double kw);

/// Exact maximization of the weighted restored load over parent-closed
/// energized sets, by bottom-up tree knapsack.
///
/// Roots, root connectors and `region.committed` are forced energized. Each
/// energized bus draws either its fixed part or its full rounded load. The
/// capacity is the region capacity rounded down. Ties prefer fewer shed
/// buses, then leaving buses de-energized, then lower capacity use.
///
/// Throws InfeasibleCommitmentError when the forced fixed loads alone
/// exceed the capacity.
Island solve_partition(const Network& net, const SupplyRegion& region,
                       double granularity = 1.0);

/// Sum over energized buses of weight times restored kW.
double objective_value(const Island& island, const Network& net);

}  // namespace islanding
