#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "islanding/feasibility.hpp"
#include "islanding/grid_model.hpp"
#include "islanding/partition_solver.hpp"
#include "islanding/power_circle.hpp"
#include "islanding/reachability.hpp"

namespace islanding {

struct PipelineOptions {
  double granularity = 1.0;  // kW
  bool correction = true;
  /// Only supply regions with at least this many buses go through
  /// region_correction; smaller ones are solved directly.
  std::size_t correction_min_members = 0;
  /// Cross-check every region of at most kOracleMaxMembers buses against
  /// the brute-force oracle.
  bool oracle_check = false;
  FlowOptions flow;
};

struct OracleCheck {
  double dp_objective = 0.0;
  double oracle_objective = 0.0;
  bool agrees = false;
};

struct IslandReport {
  int id = 0;
  SupplyRegion supply_region;  // as searched, before correction
  SupplyRegion solved_region;  // what the DP saw
  bool corrected = false;
  Island island;
  std::map<Priority, double> restored_by_level;
  double shed_kw = 0.0;
  FlowSolution flow;
  ConstraintReport constraints;
  std::optional<OracleCheck> oracle;
};

struct LevelSummary {
  double total_kw = 0.0;
  double restored_kw = 0.0;
  int ratio_percent = 0;  // rounded half up
};

struct PartitionReport {
  std::vector<BranchKey> scenario;
  double granularity = 1.0;
  std::vector<ReachableRegion> reachable;
  std::vector<IslandReport> islands;
  std::map<Priority, LevelSummary> per_level;
  std::vector<std::string> grid_connected_dgs;
  std::vector<std::string> violations;
  std::vector<std::string> notes;

  double objective() const;
  /// 0 when clean, 2 when any island violates a constraint or disagrees
  /// with the oracle.
  int exit_code() const;
};

/// Error raised by one pipeline stage, tagged with the module name.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string module, const std::string& what);
  const std::string& module() const { return module_; }

 private:
  std::string module_;
};

/// Restored / total as an integer percentage, halves rounded up.
int ratio_percent(double restored, double total);

/// Faults -> reachable regions -> supply regions -> correction -> DP ->
/// power flow. Runs sequentially and is deterministic.
PartitionReport run_pipeline(const Network& net,
                             std::span<const BranchKey> faults,
                             const PipelineOptions& options = {});

}  // namespace islanding
