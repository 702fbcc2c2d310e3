#include "islanding/partition_solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>

namespace islanding {

RoundedPowers round_powers(const SupplyRegion& region,
                           const std::map<BusId, double>& loads,
                           double granularity) {
  RoundedPowers out;
  out.capacity = floor_to(region.capacity, granularity);
  for (const auto& [bus, kw] : loads) out.loads[bus] = ceil_to(kw, granularity);
  return out;
}

std::vector<LoadSplit> decompose_loads(const Network& net,
                                       const std::vector<BusId>& buses,
                                       double granularity) {
  std::vector<LoadSplit> out;
  out.reserve(buses.size());
  for (BusId id : buses) {
    const Bus& b = net.bus(id);
    LoadSplit s;
    s.bus = id;
    const Units total = ceil_units(b.load_active, granularity);
    s.fixed_units = std::min(
        total, ceil_units((1.0 - b.controllable_fraction) * b.load_active,
                          granularity));
    s.reducible_units = total - s.fixed_units;
    s.fixed = static_cast<double>(s.fixed_units) * granularity;
    s.reducible = static_cast<double>(s.reducible_units) * granularity;
    out.push_back(s);
  }
  return out;
}

std::size_t LayeredRegion::layer_of(BusId bus) const {
  for (std::size_t i = 0; i < layers.size(); ++i)
    if (std::find(layers[i].begin(), layers[i].end(), bus) != layers[i].end())
      return i;
  throw std::out_of_range("bus " + std::to_string(bus) + " is not layered");
}

std::vector<BusId> LayeredRegion::path_to_root(BusId bus) const {
  std::vector<BusId> path{bus};
  for (auto it = parent.find(bus); it != parent.end(); it = parent.find(bus)) {
    bus = it->second;
    path.push_back(bus);
  }
  return path;
}

LayeredRegion bfs_layers(const Network& net, const SupplyRegion& region) {
  LayeredRegion out;
  out.root_buses = region.root_buses;
  std::sort(out.root_buses.begin(), out.root_buses.end());
  for (BusId r : out.root_buses)
    if (!region.contains(r))
      throw DisconnectedRegionError("root bus " + std::to_string(r) +
                                    " is not a region member");

  std::set<BusId> seen(out.root_buses.begin(), out.root_buses.end());
  std::vector<BusId> ring = out.root_buses;
  while (!ring.empty()) {
    out.layers.push_back(ring);
    std::vector<BusId> next;
    for (BusId u : ring)
      for (BusId v : net.neighbors(u))
        if (region.contains(v) && seen.insert(v).second) {
          out.parent[v] = u;
          next.push_back(v);
        }
    std::sort(next.begin(), next.end());
    ring = std::move(next);
  }
  if (seen.size() != region.members.size()) {
    for (BusId m : region.members)
      if (!seen.count(m))
        throw DisconnectedRegionError("bus " + std::to_string(m) +
                                      " is not connected to any root");
  }
  return out;
}

std::vector<BusId> root_connectors(const Network& net,
                                   const SupplyRegion& region) {
  // Prune non-root leaves of the member tree until only the subtree
  // spanning the roots is left.
  std::set<BusId> alive(region.members.begin(), region.members.end());
  const std::set<BusId> roots(region.root_buses.begin(),
                              region.root_buses.end());
  if (roots.size() <= 1) return {roots.begin(), roots.end()};

  auto degree = [&](BusId b) {
    return std::count_if(net.neighbors(b).begin(), net.neighbors(b).end(),
                         [&](BusId v) { return alive.count(v) > 0; });
  };
  std::deque<BusId> leaves;
  for (BusId b : alive)
    if (!roots.count(b) && degree(b) <= 1) leaves.push_back(b);
  while (!leaves.empty()) {
    BusId b = leaves.front();
    leaves.pop_front();
    if (!alive.erase(b)) continue;
    for (BusId v : net.neighbors(b))
      if (alive.count(v) && !roots.count(v) && degree(v) <= 1)
        leaves.push_back(v);
  }
  return {alive.begin(), alive.end()};
}

std::int64_t weighted_milli(int weight, double kw) {
  return std::llround(static_cast<double>(weight) * kw * 1000.0);
}

std::vector<BusId> Island::restored_buses() const {
  std::vector<BusId> out;
  for (BusId b : energized) {
    auto shed = shed_kw.find(b);
    auto served = restored_kw.find(b);
    const bool fully_shed = shed != shed_kw.end() && shed->second > 0.0 &&
                            served != restored_kw.end() &&
                            served->second <= 0.0;
    if (!fully_shed) out.push_back(b);
  }
  return out;
}

double objective_value(const Island& island, const Network& net) {
  std::int64_t total = 0;
  for (BusId b : island.energized) {
    auto it = island.restored_kw.find(b);
    if (it != island.restored_kw.end())
      total += weighted_milli(net.bus(b).weight(), it->second);
  }
  return static_cast<double>(total) / 1000.0;
}

namespace {

struct BusCosts {
  Units fixed = 0;
  Units full = 0;
  int weight = 0;
  double load = 0.0;
};

std::map<BusId, BusCosts> bus_costs(const Network& net,
                                    const SupplyRegion& region,
                                    double granularity) {
  std::map<BusId, BusCosts> out;
  for (const LoadSplit& s : decompose_loads(net, region.members, granularity)) {
    const Bus& b = net.bus(s.bus);
    out[s.bus] = {s.fixed_units, s.fixed_units + s.reducible_units, b.weight(),
                  b.load_active};
  }
  return out;
}

}  // namespace

SupplyRegion region_correction(const Network& net, const SupplyRegion& region,
                               double granularity) {
  const LayeredRegion layered = bfs_layers(net, region);
  const auto costs = bus_costs(net, region, granularity);
  const Units capacity = floor_units(region.capacity, granularity);

  const std::vector<BusId> connectors = root_connectors(net, region);
  std::set<BusId> base(region.committed.begin(), region.committed.end());
  base.insert(connectors.begin(), connectors.end());

  auto with_paths = [&](std::set<BusId> set, const std::vector<BusId>& buses) {
    for (BusId b : buses)
      for (BusId p : layered.path_to_root(b)) set.insert(p);
    return set;
  };
  auto full_load = [&](const std::set<BusId>& set) {
    Units total = 0;
    for (BusId b : set) total += costs.at(b).full;
    return total;
  };
  auto fixed_load = [&](const std::set<BusId>& set) {
    Units total = 0;
    for (BusId b : set) total += costs.at(b).fixed;
    return total;
  };
  auto weighted = [&](const std::set<BusId>& set) {
    std::int64_t total = 0;
    for (BusId b : set)
      total += weighted_milli(costs.at(b).weight, costs.at(b).load);
    return total;
  };
  auto members_of = [&](Priority p) {
    std::vector<BusId> out;
    for (BusId m : region.members)
      if (net.bus(m).priority == p) out.push_back(m);
    return out;
  };

  SupplyRegion out = region;

  // Stage 1: primary loads and their supply paths.
  std::vector<BusId> primary = members_of(Priority::Primary);
  std::set<BusId> committed = with_paths(base, primary);
  bool needs_shedding = full_load(committed) > capacity;
  if (needs_shedding) {
    // Shedding reducible load, lowest weight first, can at best bring the
    // committed area down to its fixed load.
    if (fixed_load(committed) > capacity) {
      std::vector<BusId> order = primary;
      std::stable_sort(order.begin(), order.end(), [&](BusId a, BusId b) {
        return costs.at(a).load < costs.at(b).load;
      });
      std::vector<BusId> kept = primary;
      std::vector<BusId> dropped;
      for (BusId b : order) {
        if (fixed_load(with_paths(base, kept)) <= capacity) break;
        kept.erase(std::find(kept.begin(), kept.end(), b));
        dropped.push_back(b);
      }
      for (auto it = dropped.rbegin(); it != dropped.rend(); ++it) {
        std::vector<BusId> trial = kept;
        trial.push_back(*it);
        if (fixed_load(with_paths(base, trial)) <= capacity) kept = trial;
      }
      committed = with_paths(base, kept);
      if (fixed_load(committed) > capacity) committed = base;
    }
  }

  if (!needs_shedding) {
    // Stage 2: every secondary load at once.
    const std::vector<BusId> secondary = members_of(Priority::Secondary);
    std::set<BusId> all = with_paths(committed, secondary);
    if (full_load(all) <= capacity) {
      committed = std::move(all);
    } else {
      // Stage 3: grow ring by ring while each enlarged area fits and
      // restores more than the last verified one.
      std::vector<BusId> admitted;
      for (std::size_t k = 1; k < layered.layers.size(); ++k) {
        for (BusId b : layered.layers[k])
          if (net.bus(b).priority == Priority::Secondary) admitted.push_back(b);
        std::set<BusId> trial = with_paths(committed, admitted);
        if (trial == committed) continue;
        if (full_load(trial) > capacity || weighted(trial) <= weighted(committed))
          break;
        committed = std::move(trial);
      }
    }
  }

  out.committed.assign(committed.begin(), committed.end());
  return out;
}

namespace {

constexpr std::int64_t kInvalid = std::numeric_limits<std::int64_t>::min();

struct Score {
  std::int64_t value = kInvalid;
  int shed = 0;

  bool valid() const { return value != kInvalid; }
  Score operator+(const Score& o) const { return {value + o.value, shed + o.shed}; }
};

bool better(const Score& a, const Score& b) {
  if (!a.valid()) return false;
  if (!b.valid()) return true;
  if (a.value != b.value) return a.value > b.value;
  return a.shed < b.shed;
}

struct Node {
  BusId bus = 0;  // 0 for the virtual super-root
  std::vector<int> children;
  Units fixed = 0;
  Units full = 0;
  std::int64_t fixed_value = 0;
  std::int64_t full_value = 0;
  bool can_shed = false;
  bool forced = false;
  bool subtree_forced = false;
  Units subtree_full = 0;

  std::vector<Score> table;
  std::vector<std::uint8_t> own_shed;            // by cost, before children
  std::vector<std::vector<std::int32_t>> picks;  // per child, by cost
};

class KnapsackTree {
 public:
  KnapsackTree(const Network& net, const SupplyRegion& region,
               double granularity)
      : capacity_(floor_units(region.capacity, granularity)) {
    const LayeredRegion layered = bfs_layers(net, region);
    std::set<BusId> forced(region.committed.begin(), region.committed.end());
    for (BusId b : root_connectors(net, region)) forced.insert(b);
    for (BusId b : region.root_buses) forced.insert(b);

    nodes_.emplace_back();  // super-root
    nodes_[0].forced = true;
    std::map<BusId, int> index;
    for (const auto& layer : layered.layers)
      for (BusId b : layer) {
        index[b] = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        nodes_.back().bus = b;
      }
    for (const LoadSplit& s : decompose_loads(net, region.members, granularity)) {
      Node& n = nodes_[static_cast<std::size_t>(index.at(s.bus))];
      const Bus& bus = net.bus(s.bus);
      n.fixed = s.fixed_units;
      n.full = s.fixed_units + s.reducible_units;
      n.fixed_value = weighted_milli(
          bus.weight(), (1.0 - bus.controllable_fraction) * bus.load_active);
      n.full_value = weighted_milli(bus.weight(), bus.load_active);
      n.can_shed = bus.controllable_fraction > 0.0 && bus.load_active > 0.0;
      n.forced = forced.count(s.bus) > 0;
    }
    for (const auto& layer : layered.layers)
      for (BusId b : layer) {
        auto p = layered.parent.find(b);
        const int parent = p == layered.parent.end() ? 0 : index.at(p->second);
        nodes_[static_cast<std::size_t>(parent)].children.push_back(index.at(b));
      }
  }

  Island solve(const Network& net, const SupplyRegion& region,
               double granularity) {
    // Nodes were created in BFS order, so reverse order is bottom-up.
    for (std::size_t i = nodes_.size(); i-- > 0;) fill(i);

    const auto& root = nodes_[0].table;
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < root.size(); ++c)
      if (best ? better(root[c], root[*best]) : root[c].valid()) best = c;
    if (!best) {
      Units forced_fixed = 0;
      for (const Node& n : nodes_)
        if (n.forced) forced_fixed += n.fixed;
      throw InfeasibleCommitmentError(
          "forced loads need at least " +
          std::to_string(static_cast<double>(forced_fixed) * granularity) +
          " kW but the pooled capacity is " +
          std::to_string(static_cast<double>(capacity_) * granularity) +
          " kW");
    }

    Island island;
    island.dgs = region.dgs;
    island.capacity = static_cast<double>(capacity_) * granularity;
    island.served = static_cast<double>(*best) * granularity;
    collect(0, static_cast<Units>(*best), net, island);
    std::sort(island.energized.begin(), island.energized.end());
    island.objective = objective_value(island, net);
    return island;
  }

 private:
  void fill(std::size_t i) {
    Node& n = nodes_[i];
    n.subtree_full = n.full;
    n.subtree_forced = n.forced;
    for (int c : n.children) {
      n.subtree_full += nodes_[static_cast<std::size_t>(c)].subtree_full;
      n.subtree_forced |= nodes_[static_cast<std::size_t>(c)].subtree_forced;
    }

    std::size_t size = static_cast<std::size_t>(std::min(capacity_, n.full)) + 1;
    n.table.assign(size, Score{});
    n.own_shed.assign(size, 0);
    if (n.full <= capacity_) n.table[static_cast<std::size_t>(n.full)] = {n.full_value, 0};
    if (n.can_shed && n.fixed <= capacity_) {
      const Score shed{n.fixed_value, 1};
      auto& slot = n.table[static_cast<std::size_t>(n.fixed)];
      if (better(shed, slot)) {
        slot = shed;
        n.own_shed[static_cast<std::size_t>(n.fixed)] = 1;
      }
    }

    for (int c : n.children) {
      Node& child = nodes_[static_cast<std::size_t>(c)];
      const std::size_t merged =
          static_cast<std::size_t>(std::min<Units>(
              capacity_, static_cast<Units>(n.table.size() - 1) +
                             static_cast<Units>(child.table.size() - 1))) +
          1;
      std::vector<Score> next(merged, Score{});
      std::vector<std::int32_t> pick(merged, -1);
      if (!child.subtree_forced)
        std::copy(n.table.begin(), n.table.end(), next.begin());
      for (std::size_t a = 0; a < n.table.size(); ++a) {
        if (!n.table[a].valid()) continue;
        for (std::size_t k = 0; k < child.table.size() && a + k < merged; ++k) {
          if (!child.table[k].valid()) continue;
          const Score cand = n.table[a] + child.table[k];
          if (better(cand, next[a + k])) {
            next[a + k] = cand;
            pick[a + k] = static_cast<std::int32_t>(k);
          }
        }
      }
      n.table = std::move(next);
      n.picks.push_back(std::move(pick));
    }
  }

  void collect(std::size_t i, Units cost, const Network& net, Island& island) {
    const Node& n = nodes_[i];
    for (std::size_t j = n.children.size(); j-- > 0;) {
      const std::int32_t k = n.picks[j][static_cast<std::size_t>(cost)];
      if (k < 0) continue;
      collect(static_cast<std::size_t>(n.children[j]), k, net, island);
      cost -= k;
    }
    if (n.bus == 0) return;
    const Bus& bus = net.bus(n.bus);
    island.energized.push_back(n.bus);
    if (n.own_shed[static_cast<std::size_t>(cost)]) {
      island.restored_kw[n.bus] =
          (1.0 - bus.controllable_fraction) * bus.load_active;
      island.shed_kw[n.bus] = bus.controllable_fraction * bus.load_active;
    } else {
      island.restored_kw[n.bus] = bus.load_active;
    }
  }

  Units capacity_;
  std::vector<Node> nodes_;
};

}  // namespace

Island solve_partition(const Network& net, const SupplyRegion& region,
                       double granularity) {
  KnapsackTree tree(net, region, granularity);
  return tree.solve(net, region, granularity);
}

}  // namespace islanding
