#include "islanding/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "islanding/oracle.hpp"

namespace islanding {

PipelineError::PipelineError(std::string module, const std::string& what)
    : std::runtime_error("[" + module + "] " + what),
      module_(std::move(module)) {}

int ratio_percent(double restored, double total) {
  if (total <= 0.0) return 0;
  // Nudge so that exact halves survive binary representation error.
  return static_cast<int>(std::floor(restored / total * 100.0 + 0.5 + 1e-9));
}

double PartitionReport::objective() const {
  double total = 0.0;
  for (const auto& isl : islands) total += isl.island.objective;
  return total;
}

int PartitionReport::exit_code() const {
  if (!violations.empty()) return 2;
  for (const auto& isl : islands)
    if (isl.oracle && !isl.oracle->agrees) return 2;
  return 0;
}

namespace {

template <typename Fn>
auto tagged(const char* module, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(module, e.what());
  }
}

}  // namespace

PartitionReport run_pipeline(const Network& base,
                             std::span<const BranchKey> faults,
                             const PipelineOptions& options) {
  PartitionReport report;
  report.scenario.assign(faults.begin(), faults.end());
  report.granularity = options.granularity;

  const Network net =
      tagged("grid_model", [&] { return apply_faults(base, faults); });

  report.reachable = tagged("reachability", [&] { return regions(net); });
  for (const auto& r : report.reachable)
    if (r.contains_slack)
      report.grid_connected_dgs.insert(report.grid_connected_dgs.end(),
                                       r.dgs.begin(), r.dgs.end());

  int next_id = 1;
  for (const auto& candidate : report.reachable) {
    if (candidate.contains_slack) continue;
    if (candidate.dgs.empty()) {
      report.notes.push_back("region with buses " +
                             std::to_string(candidate.members.front()) +
                             ".. has no DG and stays de-energized");
      continue;
    }
    const auto supply = tagged("power_circle", [&] {
      return max_supply_regions(net, candidate, options.granularity);
    });
    for (const SupplyRegion& region : supply) {
      IslandReport isl;
      isl.id = next_id++;
      isl.supply_region = region;
      isl.corrected = options.correction &&
                      region.members.size() >= options.correction_min_members;
      isl.solved_region =
          isl.corrected ? tagged("partition_solver",
                                 [&] {
                                   return region_correction(
                                       net, region, options.granularity);
                                 })
                        : region;
      isl.island = tagged("partition_solver", [&] {
        return solve_partition(net, isl.solved_region, options.granularity);
      });

      for (Priority p :
           {Priority::Primary, Priority::Secondary, Priority::Tertiary})
        isl.restored_by_level[p] = 0.0;
      for (const auto& [bus, kw] : isl.island.restored_kw)
        isl.restored_by_level[net.bus(bus).priority] += kw;
      for (const auto& [bus, kw] : isl.island.shed_kw) isl.shed_kw += kw;

      isl.flow = tagged("feasibility", [&] {
        return solve_flow(net, isl.island, options.flow);
      });
      if (!isl.flow.converged)
        throw PipelineError(
            "feasibility",
            "power flow of island " + std::to_string(isl.id) +
                " did not converge in " + std::to_string(isl.flow.iterations) +
                " iterations (last |dV| " +
                std::to_string(isl.flow.trace.empty() ? 0.0
                                                      : isl.flow.trace.back()) +
                " pu)");
      isl.constraints = check_constraints(net, isl.flow);
      for (const Violation& v : isl.constraints.violations)
        report.violations.push_back("island " + std::to_string(isl.id) + ": " +
                                    v.describe(net));
      if (isl.constraints.unrated_branches > 0)
        report.notes.push_back(
            "island " + std::to_string(isl.id) + ": " +
            std::to_string(isl.constraints.unrated_branches) +
            " branches without current rating were not checked");

      if (options.oracle_check &&
          isl.solved_region.members.size() <= kOracleMaxMembers) {
        const auto brute = tagged("oracle", [&] {
          return brute_force_partition(net, isl.solved_region,
                                       options.granularity);
        });
        OracleCheck check;
        check.dp_objective = isl.island.objective;
        check.oracle_objective = brute.best_objective;
        check.agrees = brute.feasible &&
                       std::llround(isl.island.objective * 1000.0) ==
                           brute.best_value_milli;
        isl.oracle = check;
      }
      report.islands.push_back(std::move(isl));
    }
  }
  if (report.islands.empty())
    report.notes.push_back("no islanding required");

  const auto totals = totals_by_level(net);
  for (const auto& [level, total] : totals) {
    LevelSummary s;
    s.total_kw = total;
    for (const auto& isl : report.islands)
      s.restored_kw += isl.restored_by_level.at(level);
    s.ratio_percent = ratio_percent(s.restored_kw, s.total_kw);
    report.per_level[level] = s;
  }
  return report;
}

}  // namespace islanding
