#include "islanding/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "islanding/rounding.hpp"

namespace islanding {

namespace {

struct Item {
  BusId bus = 0;
  int parent = -1;  // index into items, -1 for roots
  Units fixed = 0;
  Units full = 0;
  std::int64_t fixed_value = 0;
  std::int64_t full_value = 0;
  bool sheddable = false;
  bool forced = false;
};

class Enumerator {
 public:
  Enumerator(std::vector<Item> items, Units capacity)
      : items_(std::move(items)),
        capacity_(capacity),
        on_(items_.size(), false),
        shed_(items_.size(), false) {}

  EnumerationResult run() {
    visit(0, 0, 0);
    result_.best_objective =
        static_cast<double>(result_.best_value_milli) / 1000.0;
    return result_;
  }

 private:
  void visit(std::size_t i, Units used, std::int64_t value) {
    if (i == items_.size()) {
      ++result_.states_explored;
      record(value);
      return;
    }
    const Item& item = items_[i];
    const bool parent_on = item.parent < 0 || on_[item.parent];

    if (!item.forced) {
      on_[i] = false;
      shed_[i] = false;
      visit(i + 1, used, value);
    }
    if (!parent_on) return;
    on_[i] = true;
    if (used + item.full <= capacity_) {
      shed_[i] = false;
      visit(i + 1, used + item.full, value + item.full_value);
    }
    if (item.sheddable && used + item.fixed <= capacity_) {
      shed_[i] = true;
      visit(i + 1, used + item.fixed, value + item.fixed_value);
    }
    on_[i] = false;
    shed_[i] = false;
  }

  void record(std::int64_t value) {
    if (result_.feasible && value < result_.best_value_milli) return;
    if (!result_.feasible || value > result_.best_value_milli) {
      result_.best_sets.clear();
      result_.best_value_milli = value;
      result_.feasible = true;
    }
    EnumeratedIsland island;
    for (std::size_t k = 0; k < items_.size(); ++k) {
      if (!on_[k]) continue;
      island.energized.push_back(items_[k].bus);
      if (shed_[k]) island.shed.push_back(items_[k].bus);
    }
    std::sort(island.energized.begin(), island.energized.end());
    std::sort(island.shed.begin(), island.shed.end());
    result_.best_sets.push_back(std::move(island));
  }

  std::vector<Item> items_;
  Units capacity_;
  std::vector<bool> on_;
  std::vector<bool> shed_;
  EnumerationResult result_;
};

}  // namespace

EnumerationResult brute_force_partition(const Network& net,
                                        const SupplyRegion& region,
                                        double granularity) {
  if (region.members.size() > kOracleMaxMembers)
    throw std::length_error("oracle is limited to " +
                            std::to_string(kOracleMaxMembers) +
                            " buses, region has " +
                            std::to_string(region.members.size()));

  const std::set<BusId> members(region.members.begin(), region.members.end());
  std::set<BusId> roots(region.root_buses.begin(), region.root_buses.end());

  // Depth-first forest from the roots; preorder is a topological order.
  std::vector<Item> items;
  std::map<BusId, int> slot;
  std::map<BusId, BusId> up;
  for (BusId root : roots) {
    if (slot.count(root)) continue;
    std::vector<std::pair<BusId, int>> stack{{root, -1}};
    while (!stack.empty()) {
      auto [bus, parent] = stack.back();
      stack.pop_back();
      if (slot.count(bus)) continue;
      slot[bus] = static_cast<int>(items.size());
      Item item;
      item.bus = bus;
      // A root met while walking another root's tree is still a root.
      item.parent = roots.count(bus) ? -1 : parent;
      items.push_back(item);
      if (parent >= 0) up[bus] = items[static_cast<std::size_t>(parent)].bus;
      auto nbrs = net.neighbors(bus);
      for (auto it = nbrs.rbegin(); it != nbrs.rend(); ++it)
        if (members.count(*it) && !slot.count(*it))
          stack.emplace_back(*it, slot[bus]);
    }
  }

  // Paths joining the roots: walk each root up the first root's tree.
  std::set<BusId> forced(region.committed.begin(), region.committed.end());
  forced.insert(roots.begin(), roots.end());
  for (BusId root : roots)
    for (BusId b = root; up.count(b); b = up.at(b)) forced.insert(up.at(b));

  for (Item& item : items) {
    const Bus& bus = net.bus(item.bus);
    const double uncontrolled =
        (1.0 - bus.controllable_fraction) * bus.load_active;
    item.full = ceil_units(bus.load_active, granularity);
    item.fixed = std::min(item.full, ceil_units(uncontrolled, granularity));
    item.full_value =
        std::llround(bus.weight() * bus.load_active * 1000.0);
    item.fixed_value = std::llround(bus.weight() * uncontrolled * 1000.0);
    item.sheddable = bus.controllable_fraction > 0.0 && bus.load_active > 0.0;
    item.forced = forced.count(item.bus) > 0;
  }

  return Enumerator(std::move(items), floor_units(region.capacity, granularity))
      .run();
}

}  // namespace islanding
