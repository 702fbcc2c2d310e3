#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace islanding {

using BusId = int;

/// Load restoration class. The numeric value is the priority level used in
/// case files (1 = most critical).
enum class Priority { Primary = 1, Secondary = 2, Tertiary = 3 };

/// Objective weight of a priority class: 100 / 10 / 1.
int weight_of(Priority p);
std::string to_string(Priority p);

struct Bus {
  BusId id = 0;
  double load_active = 0.0;    // kW
  double load_reactive = 0.0;  // kVar
  Priority priority = Priority::Secondary;
  double controllable_fraction = 0.0;

  int weight() const { return weight_of(priority); }
};

enum class BranchStatus { Closed, Faulted };

struct Branch {
  BusId from = 0;
  BusId to = 0;
  double resistance = 0.0;  // ohm
  double reactance = 0.0;   // ohm
  std::optional<double> rated_current;  // A
  BranchStatus status = BranchStatus::Closed;

  bool closed() const { return status == BranchStatus::Closed; }
  bool joins(BusId a, BusId b) const {
    return (from == a && to == b) || (from == b && to == a);
  }
};

struct DistributedGenerator {
  std::string id;
  BusId bus = 0;
  double rated_capacity = 0.0;    // kW
  double predicted_output = 0.0;  // kW
  double sigma = 0.0;             // kW, std-dev of output
};

struct VoltageLimits {
  double min = 0.95;  // pu
  double max = 1.05;  // pu
};

/// Unordered branch endpoints used to name a branch in fault lists.
struct BranchKey {
  BusId a = 0;
  BusId b = 0;

  friend bool operator==(const BranchKey&, const BranchKey&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownBranchError : public std::runtime_error {
 public:
  explicit UnknownBranchError(BranchKey key);
  BranchKey key() const { return key_; }

 private:
  BranchKey key_;
};

/// A radial distribution network. Immutable once constructed; every
/// mutating operation returns a new value.
///
/// Invariants enforced by the constructor: bus ids are exactly 1..n in
/// order, branch endpoints and DG buses exist, no self loops or parallel
/// branches, and the full branch set (closed and faulted) forms a spanning
/// tree rooted at the slack bus.
class Network {
 public:
  /// Empty network: no buses, no slack. Only useful as a neutral value.
  Network() = default;

  Network(std::vector<Bus> buses, std::vector<Branch> branches,
          std::vector<DistributedGenerator> dgs, BusId slack_bus,
          double base_kv, VoltageLimits limits = {});

  const std::vector<Bus>& buses() const { return buses_; }
  const std::vector<Branch>& branches() const { return branches_; }
  const std::vector<DistributedGenerator>& dgs() const { return dgs_; }
  BusId slack_bus() const { return slack_; }
  double base_kv() const { return base_kv_; }
  const VoltageLimits& voltage_limits() const { return limits_; }

  std::size_t size() const { return buses_.size(); }
  bool contains(BusId id) const {
    return id >= 1 && static_cast<std::size_t>(id) <= buses_.size();
  }
  const Bus& bus(BusId id) const;
  const DistributedGenerator& dg(const std::string& id) const;

  /// Buses joined to `id` by closed branches, ascending.
  std::span<const BusId> neighbors(BusId id) const;

  /// Index into branches() of the branch joining a and b, if any.
  std::optional<std::size_t> find_branch(BusId a, BusId b) const;

  std::size_t closed_branch_count() const;
  double total_active_load() const;

  Network with_voltage_limits(VoltageLimits limits) const;
  Network with_branch_status(std::size_t branch_index,
                             BranchStatus status) const;

  friend bool operator==(const Network& lhs, const Network& rhs);

 private:
  void build_adjacency();

  std::vector<Bus> buses_;
  std::vector<Branch> branches_;
  std::vector<DistributedGenerator> dgs_;
  BusId slack_ = 0;
  double base_kv_ = 0.0;
  VoltageLimits limits_;
  std::vector<std::vector<BusId>> adjacency_;
};

bool operator==(const Bus& lhs, const Bus& rhs);
bool operator==(const Branch& lhs, const Branch& rhs);
bool operator==(const DistributedGenerator& lhs,
                const DistributedGenerator& rhs);

/// Reads a case file from disk. Throws ParseError or ValidationError.
Network load_case(const std::string& path);

/// Parses case-file text.
Network parse_case(const std::string& text);

/// Serializes to the case-file format. Faulted branches are written as
/// closed: fault state is scenario data, not case data.
std::string write_case(const Network& net);

/// Marks the named branches Faulted. Already-faulted branches are left as
/// they are, which makes the operation idempotent.
Network apply_faults(const Network& net, std::span<const BranchKey> faulted);

/// Parses "A-B" into a branch key.
BranchKey parse_branch_key(const std::string& text);

/// Active load summed per priority class; every class is present.
std::map<Priority, double> totals_by_level(const Network& net);

}  // namespace islanding
