#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "islanding/grid_model.hpp"
#include "islanding/partition_solver.hpp"

namespace islanding {

struct FlowOptions {
  double tolerance = 1e-6;  // pu, on the largest voltage update
  int max_iterations = 100;
};

struct FlowSolution {
  BusId root = 0;                         // swing bus, held at 1.0 pu
  std::map<BusId, double> voltages;       // pu magnitude
  std::map<std::size_t, double> currents; // branch index -> A
  bool converged = false;
  int iterations = 0;
  std::vector<double> trace;  // largest |dV| per iteration, pu

  double root_injection_kw = 0.0;
  double dg_injection_kw = 0.0;  // non-swing DGs of the island
  double served_kw = 0.0;
  double losses_kw = 0.0;
};

/// Backward/forward sweep over an island.
///
/// The DG with the largest stable output is the swing source at 1.0 pu.
/// Any other DGs in the island inject active power in proportion to their
/// stable output, together covering the same share of the served load.
/// Reactive load is scaled by the served fraction of active load.
/// Per-unit base: 1 MVA and the case base voltage.
///
/// Returns converged = false with the iteration trace if the tolerance is
/// not met within the iteration limit. Throws std::invalid_argument when
/// the island has no DG bus among its energized buses or is not connected.
FlowSolution solve_flow(const Network& net, const Island& island,
                        const FlowOptions& options = {});

struct Violation {
  enum class Kind { Voltage, Current };
  Kind kind = Kind::Voltage;
  BusId bus = 0;           // voltage violations
  std::size_t branch = 0;  // current violations, index into branches()
  double value = 0.0;
  double limit = 0.0;

  std::string describe(const Network& net) const;
};

struct ConstraintReport {
  std::vector<Violation> violations;
  std::size_t unrated_branches = 0;  // energized branches skipped
};

/// Voltage band on every solved bus, and I < I_N on every solved branch
/// that carries a rating.
ConstraintReport check_constraints(const Network& net, const FlowSolution& sol);

}  // namespace islanding
