#include "islanding/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace islanding {

namespace {

using Complex = std::complex<double>;

constexpr double kBaseKva = 1000.0;

struct SweepNode {
  BusId bus = 0;
  int parent = -1;
  std::size_t branch = 0;  // branch to parent
  Complex impedance;       // pu
  Complex demand;          // pu, load minus local DG injection
};

}  // namespace

FlowSolution solve_flow(const Network& net, const Island& island,
                        const FlowOptions& options) {
  const std::set<BusId> energized(island.energized.begin(),
                                  island.energized.end());

  // Swing source: largest stable output, first listed on ties.
  const DistributedGenerator* swing = nullptr;
  double pooled = 0.0;
  for (const std::string& id : island.dgs) {
    const DistributedGenerator& dg = net.dg(id);
    if (!energized.count(dg.bus)) continue;
    const double out = std::max(dg.predicted_output - dg.sigma, 0.0);
    pooled += out;
    if (!swing ||
        out > std::max(swing->predicted_output - swing->sigma, 0.0))
      swing = &dg;
  }
  if (!swing)
    throw std::invalid_argument("island has no energized DG bus");

  FlowSolution sol;
  sol.root = swing->bus;

  double served = 0.0;
  for (const auto& [bus, kw] : island.restored_kw) served += kw;

  // Tree in BFS order from the swing bus.
  std::vector<SweepNode> nodes;
  std::map<BusId, int> index;
  nodes.push_back({swing->bus, -1, 0, {}, {}});
  index[swing->bus] = 0;
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    const BusId u = nodes[head].bus;
    for (BusId v : net.neighbors(u)) {
      if (!energized.count(v) || index.count(v)) continue;
      const std::size_t br = *net.find_branch(u, v);
      const Branch& branch = net.branches()[br];
      const double z_base = net.base_kv() * net.base_kv() / (kBaseKva / 1000.0);
      index[v] = static_cast<int>(nodes.size());
      nodes.push_back({v, static_cast<int>(head), br,
                       Complex(branch.resistance, branch.reactance) / z_base,
                       {}});
    }
  }
  if (nodes.size() != energized.size())
    throw std::invalid_argument("island is not connected to its swing DG");

  for (SweepNode& n : nodes) {
    const Bus& bus = net.bus(n.bus);
    auto it = island.restored_kw.find(n.bus);
    const double p = it == island.restored_kw.end() ? 0.0 : it->second;
    const double q =
        bus.load_active > 0.0 ? bus.load_reactive * p / bus.load_active : 0.0;
    n.demand = Complex(p, q) / kBaseKva;
  }
  // Non-swing DGs carry their pro-rata share of the served load.
  for (const std::string& id : island.dgs) {
    const DistributedGenerator& dg = net.dg(id);
    if (&dg == swing || !energized.count(dg.bus) || pooled <= 0.0) continue;
    const double share =
        served * std::max(dg.predicted_output - dg.sigma, 0.0) / pooled;
    nodes[static_cast<std::size_t>(index.at(dg.bus))].demand -=
        Complex(share, 0.0) / kBaseKva;
    sol.dg_injection_kw += share;
  }

  std::vector<Complex> voltage(nodes.size(), Complex(1.0, 0.0));
  std::vector<Complex> current(nodes.size());
  for (int it = 1; it <= options.max_iterations; ++it) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      current[i] = std::conj(nodes[i].demand / voltage[i]);
    for (std::size_t i = nodes.size(); i-- > 1;)
      current[static_cast<std::size_t>(nodes[i].parent)] += current[i];

    double max_change = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const Complex updated =
          voltage[static_cast<std::size_t>(nodes[i].parent)] -
          nodes[i].impedance * current[i];
      max_change = std::max(max_change, std::abs(updated - voltage[i]));
      voltage[i] = updated;
    }
    sol.trace.push_back(max_change);
    sol.iterations = it;
    if (max_change < options.tolerance) {
      sol.converged = true;
      break;
    }
  }

  // Currents consistent with the final voltages.
  for (std::size_t i = 0; i < nodes.size(); ++i)
    current[i] = std::conj(nodes[i].demand / voltage[i]);
  for (std::size_t i = nodes.size(); i-- > 1;)
    current[static_cast<std::size_t>(nodes[i].parent)] += current[i];

  const double i_base = kBaseKva / (std::sqrt(3.0) * net.base_kv());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    sol.voltages[nodes[i].bus] = std::abs(voltage[i]);
    if (i == 0) continue;
    sol.currents[nodes[i].branch] = std::abs(current[i]) * i_base;
    sol.losses_kw +=
        std::norm(current[i]) * nodes[i].impedance.real() * kBaseKva;
  }
  sol.root_injection_kw =
      (voltage[0] * std::conj(current[0])).real() * kBaseKva;
  sol.served_kw = served;
  return sol;
}

std::string Violation::describe(const Network& net) const {
  std::ostringstream out;
  if (kind == Kind::Voltage) {
    out << "bus " << bus << " voltage " << value << " pu outside ["
        << net.voltage_limits().min << ", " << net.voltage_limits().max << "]";
  } else {
    const Branch& br = net.branches().at(branch);
    out << "branch " << br.from << "-" << br.to << " current " << value
        << " A not below rating " << limit << " A";
  }
  return out.str();
}

ConstraintReport check_constraints(const Network& net,
                                   const FlowSolution& sol) {
  ConstraintReport report;
  const VoltageLimits& lim = net.voltage_limits();
  for (const auto& [bus, u] : sol.voltages) {
    if (u < lim.min)
      report.violations.push_back(
          {Violation::Kind::Voltage, bus, 0, u, lim.min});
    else if (u > lim.max)
      report.violations.push_back(
          {Violation::Kind::Voltage, bus, 0, u, lim.max});
  }
  for (const auto& [branch, amps] : sol.currents) {
    const auto& rating = net.branches().at(branch).rated_current;
    if (!rating) {
      ++report.unrated_branches;
      continue;
    }
    if (!(amps < *rating))
      report.violations.push_back(
          {Violation::Kind::Current, 0, branch, amps, *rating});
  }
  return report;
}

}  // namespace islanding
