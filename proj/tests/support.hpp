#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "islanding/grid_model.hpp"
#include "islanding/power_circle.hpp"

namespace islanding::testing {

inline std::string data_path(const std::string& name) {
  return std::string(ISLANDING_DATA_DIR) + "/" + name;
}

inline const Network& ieee69() {
  static const Network net = load_case(data_path("ieee69.case"));
  return net;
}

inline const Network& ieee69_fault34() {
  static const Network net = [] {
    const BranchKey fault{3, 4};
    return apply_faults(ieee69(), std::span(&fault, 1));
  }();
  return net;
}

struct BusSpec {
  double load = 0.0;
  Priority priority = Priority::Secondary;
  double fraction = 0.0;
};

/// Builds a network with buses 1..loads.size(); edges are (from, to) pairs.
/// Every branch gets r = 0.1, x = 0.05 ohm and no rating.
inline Network make_network(const std::vector<BusSpec>& specs,
                            const std::vector<std::pair<BusId, BusId>>& edges,
                            std::vector<DistributedGenerator> dgs = {},
                            BusId slack = 1, double base_kv = 12.66) {
  std::vector<Bus> buses;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    Bus b;
    b.id = static_cast<BusId>(i + 1);
    b.load_active = specs[i].load;
    b.load_reactive = specs[i].load * 0.7;
    b.priority = specs[i].priority;
    b.controllable_fraction = specs[i].fraction;
    buses.push_back(b);
  }
  std::vector<Branch> branches;
  for (auto [a, b] : edges) {
    Branch br;
    br.from = a;
    br.to = b;
    br.resistance = 0.1;
    br.reactance = 0.05;
    branches.push_back(br);
  }
  return Network(std::move(buses), std::move(branches), std::move(dgs), slack,
                 base_kv);
}

inline DistributedGenerator make_dg(std::string id, BusId bus, double kw) {
  return DistributedGenerator{std::move(id), bus, kw, kw, 0.0};
}

/// Hand-built region for solver tests; committed_load is left to callers
/// that care about it.
inline SupplyRegion make_region(std::vector<BusId> members,
                                std::vector<BusId> roots, double capacity,
                                std::vector<std::string> dgs = {"G"}) {
  SupplyRegion r;
  std::sort(members.begin(), members.end());
  std::sort(roots.begin(), roots.end());
  r.members = std::move(members);
  r.root_buses = std::move(roots);
  r.capacity = capacity;
  r.dgs = std::move(dgs);
  return r;
}

/// Random radial network: bus k > 1 hangs off a uniformly chosen earlier
/// bus. Loads are whole or half kW so rounding at g = 1 is exercised.
struct RandomTreeOptions {
  std::size_t buses = 10;
  double max_load = 40.0;
  double p_controllable = 0.4;
};

inline Network random_network(std::mt19937_64& rng,
                              const RandomTreeOptions& opt = {}) {
  std::uniform_int_distribution<int> load_halves(
      0, static_cast<int>(opt.max_load * 2));
  std::uniform_int_distribution<int> prio(1, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<BusSpec> specs;
  std::vector<std::pair<BusId, BusId>> edges;
  for (std::size_t i = 0; i < opt.buses; ++i) {
    BusSpec s;
    s.load = load_halves(rng) / 2.0;
    s.priority = static_cast<Priority>(prio(rng));
    if (unit(rng) < opt.p_controllable) {
      static const double fractions[] = {0.25, 0.5, 1.0, 0.3};
      s.fraction = fractions[std::uniform_int_distribution<int>(0, 3)(rng)];
    }
    specs.push_back(s);
    if (i > 0) {
      std::uniform_int_distribution<BusId> parent(1, static_cast<BusId>(i));
      edges.emplace_back(parent(rng), static_cast<BusId>(i + 1));
    }
  }
  return make_network(specs, edges);
}

inline std::vector<BusId> all_buses(const Network& net) {
  std::vector<BusId> out;
  for (const Bus& b : net.buses()) out.push_back(b.id);
  return out;
}

}  // namespace islanding::testing
