#include "islanding/power_circle.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

#include "islanding/rounding.hpp"

namespace islanding {

bool SupplyRegion::contains(BusId id) const {
  return std::binary_search(members.begin(), members.end(), id);
}

double stable_output(const DistributedGenerator& dg, double granularity) {
  return floor_to(std::max(dg.predicted_output - dg.sigma, 0.0), granularity);
}

namespace {

struct Growth {
  std::set<BusId> members;
  std::set<BusId> unserved_roots;
  Units committed = 0;
  Units capacity = 0;
};

bool admission_order(const Network& net, BusId a, BusId b) {
  const Bus& x = net.bus(a);
  const Bus& y = net.bus(b);
  if (x.weight() != y.weight()) return x.weight() > y.weight();
  if (x.load_active != y.load_active) return x.load_active > y.load_active;
  return a < b;
}

// Grows `g` outward from its current members, one breadth-first ring at a
// time, admitting buses while their load fits.
void grow(const Network& net, Growth& g, double granularity) {
  std::set<BusId> visited = g.members;
  std::vector<BusId> ring(g.members.begin(), g.members.end());
  while (!ring.empty()) {
    std::vector<BusId> frontier;
    for (BusId u : ring)
      for (BusId v : net.neighbors(u))
        if (visited.insert(v).second) frontier.push_back(v);
    std::sort(frontier.begin(), frontier.end(),
              [&](BusId a, BusId b) { return admission_order(net, a, b); });

    std::vector<BusId> admitted;
    for (BusId v : frontier) {
      const Units load = ceil_units(net.bus(v).load_active, granularity);
      if (g.committed + load <= g.capacity) {
        g.committed += load;
        g.members.insert(v);
        admitted.push_back(v);
      }
    }
    ring = std::move(admitted);
  }
}

SupplyRegion to_region(const Growth& g, std::vector<std::string> dgs,
                       std::vector<BusId> roots, double granularity) {
  SupplyRegion r;
  r.dgs = std::move(dgs);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  r.root_buses = std::move(roots);
  r.capacity = static_cast<double>(g.capacity) * granularity;
  r.members.assign(g.members.begin(), g.members.end());
  r.committed_load = static_cast<double>(g.committed) * granularity;
  r.surplus = r.capacity - r.committed_load;
  r.unserved_roots.assign(g.unserved_roots.begin(), g.unserved_roots.end());
  return r;
}

void require_connected_origin(const Network& net,
                              std::span<const BusId> origin) {
  for (BusId b : origin)
    if (!net.contains(b))
      throw std::invalid_argument("origin bus " + std::to_string(b) +
                                  " is not in the network");
  if (origin.size() < 2) return;
  std::vector<bool> seen(net.size() + 1, false);
  std::queue<BusId> queue;
  queue.push(origin.front());
  seen[origin.front()] = true;
  while (!queue.empty()) {
    BusId u = queue.front();
    queue.pop();
    for (BusId v : net.neighbors(u))
      if (!seen[v]) {
        seen[v] = true;
        queue.push(v);
      }
  }
  for (BusId b : origin)
    if (!seen[b])
      throw std::invalid_argument("origin bus " + std::to_string(b) +
                                  " is not reachable from bus " +
                                  std::to_string(origin.front()));
}

// Admits each listed root: its load is committed if it fits, otherwise the
// root is kept as an unserved member.
void seat_roots(const Network& net, Growth& g, std::vector<BusId> roots,
                double granularity) {
  std::sort(roots.begin(), roots.end());
  for (BusId b : roots) {
    if (g.members.count(b)) continue;
    g.members.insert(b);
    const Units load = ceil_units(net.bus(b).load_active, granularity);
    if (g.committed + load <= g.capacity)
      g.committed += load;
    else
      g.unserved_roots.insert(b);
  }
}

}  // namespace

SupplyRegion expand_circle(const Network& net, std::span<const BusId> origin,
                           double capacity, double granularity) {
  if (capacity < 0.0) throw std::invalid_argument("capacity must be >= 0");
  require_connected_origin(net, origin);
  Growth g;
  g.capacity = floor_units(capacity, granularity);
  std::vector<BusId> roots(origin.begin(), origin.end());
  seat_roots(net, g, roots, granularity);
  grow(net, g, granularity);
  return to_region(g, {}, roots, granularity);
}

std::vector<SupplyRegion> merge_overlapping(const Network& net,
                                            std::vector<SupplyRegion> regions,
                                            double granularity) {
  auto overlaps = [](const SupplyRegion& a, const SupplyRegion& b) {
    auto i = a.members.begin();
    auto j = b.members.begin();
    while (i != a.members.end() && j != b.members.end()) {
      if (*i == *j) return true;
      if (*i < *j)
        ++i;
      else
        ++j;
    }
    return false;
  };

  for (;;) {
    std::size_t first = regions.size();
    std::size_t second = regions.size();
    for (std::size_t i = 0; i < regions.size() && first == regions.size(); ++i)
      for (std::size_t j = i + 1; j < regions.size(); ++j)
        if (overlaps(regions[i], regions[j])) {
          first = i;
          second = j;
          break;
        }
    if (first == regions.size()) return regions;

    const SupplyRegion& a = regions[first];
    const SupplyRegion& b = regions[second];

    Growth g;
    g.capacity = floor_units(a.capacity, granularity) +
                 floor_units(b.capacity, granularity);
    g.members.insert(a.members.begin(), a.members.end());
    g.members.insert(b.members.begin(), b.members.end());

    // A root left unserved by its own circle may have been admitted as an
    // ordinary member of the other one; only roots unserved in both remain
    // candidates for the pooled surplus.
    auto served_in = [](const SupplyRegion& r, BusId bus) {
      return r.contains(bus) &&
             !std::binary_search(r.unserved_roots.begin(),
                                 r.unserved_roots.end(), bus);
    };
    std::vector<BusId> pending;
    for (BusId m : g.members) {
      if (served_in(a, m) || served_in(b, m))
        g.committed += ceil_units(net.bus(m).load_active, granularity);
      else
        pending.push_back(m);
    }
    for (BusId m : pending) {
      const Units load = ceil_units(net.bus(m).load_active, granularity);
      if (g.committed + load <= g.capacity)
        g.committed += load;
      else
        g.unserved_roots.insert(m);
    }

    grow(net, g, granularity);

    std::vector<std::string> dgs = a.dgs;
    dgs.insert(dgs.end(), b.dgs.begin(), b.dgs.end());
    std::vector<BusId> roots = a.root_buses;
    roots.insert(roots.end(), b.root_buses.begin(), b.root_buses.end());
    SupplyRegion merged = to_region(g, std::move(dgs), std::move(roots),
                                    granularity);

    regions.erase(regions.begin() + static_cast<std::ptrdiff_t>(second));
    regions[first] = std::move(merged);
  }
}

std::vector<SupplyRegion> max_supply_regions(const Network& net,
                                             const ReachableRegion& region,
                                             double granularity) {
  std::vector<SupplyRegion> circles;
  for (const std::string& id : region.dgs) {
    const DistributedGenerator& dg = net.dg(id);
    const BusId origin[] = {dg.bus};
    SupplyRegion c =
        expand_circle(net, origin, stable_output(dg, granularity), granularity);
    c.dgs = {id};
    circles.push_back(std::move(c));
  }
  return merge_overlapping(net, std::move(circles), granularity);
}

}  // namespace islanding
