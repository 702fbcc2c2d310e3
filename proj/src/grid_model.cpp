#include "islanding/grid_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

namespace islanding {

int weight_of(Priority p) {
  switch (p) {
    case Priority::Primary:
      return 100;
    case Priority::Secondary:
      return 10;
    case Priority::Tertiary:
      return 1;
  }
  return 0;
}

std::string to_string(Priority p) {
  switch (p) {
    case Priority::Primary:
      return "primary";
    case Priority::Secondary:
      return "secondary";
    case Priority::Tertiary:
      return "tertiary";
  }
  return "unknown";
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

UnknownBranchError::UnknownBranchError(BranchKey key)
    : std::runtime_error("unknown branch " + std::to_string(key.a) + "-" +
                         std::to_string(key.b)),
      key_(key) {}

namespace {

std::string bus_name(BusId id) { return "bus " + std::to_string(id); }

std::string branch_name(const Branch& br) {
  return "branch " + std::to_string(br.from) + "-" + std::to_string(br.to);
}

}  // namespace

Network::Network(std::vector<Bus> buses, std::vector<Branch> branches,
                 std::vector<DistributedGenerator> dgs, BusId slack_bus,
                 double base_kv, VoltageLimits limits)
    : buses_(std::move(buses)),
      branches_(std::move(branches)),
      dgs_(std::move(dgs)),
      slack_(slack_bus),
      base_kv_(base_kv),
      limits_(limits) {
  const auto n = buses_.size();
  if (n == 0) throw ValidationError("network has no buses");

  for (std::size_t i = 0; i < n; ++i) {
    const Bus& b = buses_[i];
    if (b.id != static_cast<BusId>(i + 1)) {
      throw ValidationError(bus_name(b.id) + ": ids must be unique and "
                            "contiguous 1.." + std::to_string(n) +
                            " (expected " + std::to_string(i + 1) + ")");
    }
    if (!(b.load_active >= 0.0))
      throw ValidationError(bus_name(b.id) + ": negative active load");
    if (!(b.controllable_fraction >= 0.0 && b.controllable_fraction <= 1.0))
      throw ValidationError(bus_name(b.id) +
                            ": controllable fraction outside [0, 1]");
  }
  if (!contains(slack_))
    throw ValidationError("slack " + bus_name(slack_) + " does not exist");
  if (!(base_kv_ > 0.0)) throw ValidationError("base voltage must be positive");
  if (!(limits_.min > 0.0 && limits_.min < limits_.max))
    throw ValidationError("voltage limits must satisfy 0 < umin < umax");

  std::set<std::pair<BusId, BusId>> seen;
  for (const Branch& br : branches_) {
    if (!contains(br.from) || !contains(br.to))
      throw ValidationError(branch_name(br) + ": endpoint does not exist");
    if (br.from == br.to)
      throw ValidationError(branch_name(br) + ": self loop");
    if (!(br.resistance >= 0.0 && br.reactance >= 0.0))
      throw ValidationError(branch_name(br) + ": negative impedance");
    if (br.rated_current && !(*br.rated_current > 0.0))
      throw ValidationError(branch_name(br) + ": rated current must be > 0");
    auto key = std::minmax(br.from, br.to);
    if (!seen.insert(key).second)
      throw ValidationError(branch_name(br) + ": duplicate branch");
  }

  std::set<std::string> names;
  for (const auto& dg : dgs_) {
    if (!names.insert(dg.id).second)
      throw ValidationError("DG " + dg.id + ": duplicate name");
    if (!contains(dg.bus))
      throw ValidationError("DG " + dg.id + ": " + bus_name(dg.bus) +
                            " does not exist");
    if (!(dg.rated_capacity >= 0.0 && dg.predicted_output >= 0.0 &&
          dg.predicted_output <= dg.rated_capacity && dg.sigma >= 0.0))
      throw ValidationError("DG " + dg.id +
                            ": requires 0 <= predicted <= rated, sigma >= 0");
  }

  // Radial check on the full branch set: n - 1 branches and connected.
  if (branches_.size() != n - 1) {
    throw ValidationError("topology is not a tree: " + std::to_string(n) +
                          " buses but " + std::to_string(branches_.size()) +
                          " branches");
  }
  std::vector<std::vector<BusId>> all(n + 1);
  for (const Branch& br : branches_) {
    all[br.from].push_back(br.to);
    all[br.to].push_back(br.from);
  }
  std::vector<bool> visited(n + 1, false);
  std::queue<BusId> queue;
  queue.push(slack_);
  visited[slack_] = true;
  while (!queue.empty()) {
    BusId u = queue.front();
    queue.pop();
    for (BusId v : all[u]) {
      if (!visited[v]) {
        visited[v] = true;
        queue.push(v);
      }
    }
  }
  for (BusId id = 1; id <= static_cast<BusId>(n); ++id) {
    if (!visited[id])
      throw ValidationError("topology is not a tree: " + bus_name(id) +
                            " is not connected to the slack bus");
  }

  build_adjacency();
}

void Network::build_adjacency() {
  adjacency_.assign(buses_.size() + 1, {});
  for (const Branch& br : branches_) {
    if (!br.closed()) continue;
    adjacency_[br.from].push_back(br.to);
    adjacency_[br.to].push_back(br.from);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

const Bus& Network::bus(BusId id) const {
  if (!contains(id)) throw std::out_of_range(bus_name(id) + " does not exist");
  return buses_[static_cast<std::size_t>(id - 1)];
}

const DistributedGenerator& Network::dg(const std::string& id) const {
  auto it = std::find_if(dgs_.begin(), dgs_.end(),
                         [&](const auto& g) { return g.id == id; });
  if (it == dgs_.end()) throw std::out_of_range("DG " + id + " does not exist");
  return *it;
}

std::span<const BusId> Network::neighbors(BusId id) const {
  if (!contains(id)) throw std::out_of_range(bus_name(id) + " does not exist");
  return adjacency_[static_cast<std::size_t>(id)];
}

std::optional<std::size_t> Network::find_branch(BusId a, BusId b) const {
  for (std::size_t i = 0; i < branches_.size(); ++i)
    if (branches_[i].joins(a, b)) return i;
  return std::nullopt;
}

std::size_t Network::closed_branch_count() const {
  return static_cast<std::size_t>(
      std::count_if(branches_.begin(), branches_.end(),
                    [](const Branch& br) { return br.closed(); }));
}

double Network::total_active_load() const {
  return std::accumulate(
      buses_.begin(), buses_.end(), 0.0,
      [](double acc, const Bus& b) { return acc + b.load_active; });
}

Network Network::with_voltage_limits(VoltageLimits limits) const {
  return Network(buses_, branches_, dgs_, slack_, base_kv_, limits);
}

Network Network::with_branch_status(std::size_t branch_index,
                                    BranchStatus status) const {
  Network copy = *this;
  copy.branches_.at(branch_index).status = status;
  copy.build_adjacency();
  return copy;
}

bool operator==(const Bus& lhs, const Bus& rhs) {
  return lhs.id == rhs.id && lhs.load_active == rhs.load_active &&
         lhs.load_reactive == rhs.load_reactive &&
         lhs.priority == rhs.priority &&
         lhs.controllable_fraction == rhs.controllable_fraction;
}

bool operator==(const Branch& lhs, const Branch& rhs) {
  return lhs.from == rhs.from && lhs.to == rhs.to &&
         lhs.resistance == rhs.resistance && lhs.reactance == rhs.reactance &&
         lhs.rated_current == rhs.rated_current && lhs.status == rhs.status;
}

bool operator==(const DistributedGenerator& lhs,
                const DistributedGenerator& rhs) {
  return lhs.id == rhs.id && lhs.bus == rhs.bus &&
         lhs.rated_capacity == rhs.rated_capacity &&
         lhs.predicted_output == rhs.predicted_output &&
         lhs.sigma == rhs.sigma;
}

bool operator==(const Network& lhs, const Network& rhs) {
  return lhs.buses_ == rhs.buses_ && lhs.branches_ == rhs.branches_ &&
         lhs.dgs_ == rhs.dgs_ && lhs.slack_ == rhs.slack_ &&
         lhs.base_kv_ == rhs.base_kv_ &&
         lhs.limits_.min == rhs.limits_.min &&
         lhs.limits_.max == rhs.limits_.max;
}

Network apply_faults(const Network& net, std::span<const BranchKey> faulted) {
  Network out = net;
  for (const BranchKey& key : faulted) {
    auto idx = out.find_branch(key.a, key.b);
    if (!idx) throw UnknownBranchError(key);
    if (out.branches()[*idx].closed())
      out = out.with_branch_status(*idx, BranchStatus::Faulted);
  }
  return out;
}

std::map<Priority, double> totals_by_level(const Network& net) {
  std::map<Priority, double> totals{{Priority::Primary, 0.0},
                                    {Priority::Secondary, 0.0},
                                    {Priority::Tertiary, 0.0}};
  for (const Bus& b : net.buses()) totals[b.priority] += b.load_active;
  return totals;
}

}  // namespace islanding
