#include "islanding/report.hpp"

#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

namespace islanding {

namespace {

double tidy(double kw) { return std::round(kw * 1e6) / 1e6; }

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string level_name(Priority p) {
  switch (p) {
    case Priority::Primary:
      return "Primary load";
    case Priority::Secondary:
      return "Secondary load";
    case Priority::Tertiary:
      return "Tertiary load";
  }
  return "";
}

std::string fixed2(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << v;
  return out.str();
}

}  // namespace

std::string format_ranges(const std::vector<BusId>& buses) {
  std::string out;
  for (std::size_t i = 0; i < buses.size();) {
    std::size_t j = i;
    while (j + 1 < buses.size() && buses[j + 1] == buses[j] + 1) ++j;
    if (!out.empty()) out += ", ";
    out += std::to_string(buses[i]);
    if (j > i) out += "-" + std::to_string(buses[j]);
    i = j + 1;
  }
  return out;
}

std::string emit_table(const PartitionReport& report) {
  std::ostringstream out;
  out << "Scenario: ";
  if (report.scenario.empty()) out << "no faults";
  for (std::size_t i = 0; i < report.scenario.size(); ++i)
    out << (i ? ", " : "") << "fault " << report.scenario[i].a << "-"
        << report.scenario[i].b;
  out << "\nGrid-connected DGs: "
      << (report.grid_connected_dgs.empty()
              ? std::string("none")
              : join(report.grid_connected_dgs, ", "))
      << "\n\n";

  out << "Island division\n";
  out << std::left << std::setw(8) << "Island" << std::setw(14) << "DGs"
      << "Restored load buses\n";
  for (const auto& isl : report.islands) {
    out << std::left << std::setw(8) << isl.id << std::setw(14)
        << join(isl.island.dgs, ", ")
        << format_ranges(isl.island.restored_buses()) << "\n";
  }
  if (report.islands.empty()) out << "(none)\n";

  out << "\nLoad restoration by level\n";
  out << std::left << std::setw(16) << "Level" << std::right << std::setw(12)
      << "Total/kW" << std::setw(14) << "Restored/kW" << std::setw(8)
      << "Ratio%" << "\n";
  for (const auto& [level, s] : report.per_level) {
    out << std::left << std::setw(16) << level_name(level) << std::right
        << std::setw(12) << fixed2(s.total_kw) << std::setw(14)
        << fixed2(s.restored_kw) << std::setw(8) << s.ratio_percent << "\n";
  }
  out << "\nObjective (weighted restored kW): " << fixed2(report.objective())
      << "\n";

  for (const auto& isl : report.islands) {
    double vmin = 1.0;
    double vmax = 1.0;
    for (const auto& [bus, u] : isl.flow.voltages) {
      vmin = std::min(vmin, u);
      vmax = std::max(vmax, u);
    }
    out << "Island " << isl.id << ": served " << fixed2(isl.island.served)
        << " of " << fixed2(isl.island.capacity) << " kW, shed "
        << fixed2(isl.shed_kw) << " kW, voltage " << std::setprecision(4)
        << std::fixed << vmin << "-" << vmax << " pu, losses "
        << fixed2(isl.flow.losses_kw) << " kW"
        << (isl.corrected ? ", corrected" : "");
    if (isl.oracle)
      out << ", oracle " << (isl.oracle->agrees ? "agrees" : "DISAGREES");
    out << "\n";
  }
  for (const auto& v : report.violations) out << "VIOLATION: " << v << "\n";
  for (const auto& n : report.notes) out << "note: " << n << "\n";
  return out.str();
}

std::string emit_json(const PartitionReport& report) {
  using nlohmann::json;
  json doc;
  doc["schema"] = kReportSchema;
  doc["granularity_kw"] = report.granularity;

  json faults = json::array();
  for (const auto& f : report.scenario) faults.push_back({f.a, f.b});
  doc["scenario"] = {{"faults", faults}};
  doc["grid_connected_dgs"] = report.grid_connected_dgs;

  json islands = json::array();
  for (const auto& isl : report.islands) {
    json restored = json::array();
    for (const auto& [bus, kw] : isl.island.restored_kw)
      restored.push_back({bus, tidy(kw)});
    json shed = json::array();
    for (const auto& [bus, kw] : isl.island.shed_kw)
      shed.push_back({bus, tidy(kw)});
    json levels;
    for (const auto& [level, kw] : isl.restored_by_level)
      levels[to_string(level)] = tidy(kw);
    double vmin = 1.0;
    double vmax = 1.0;
    for (const auto& [bus, u] : isl.flow.voltages) {
      vmin = std::min(vmin, u);
      vmax = std::max(vmax, u);
    }
    json item = {
        {"id", isl.id},
        {"dgs", isl.island.dgs},
        {"supply_region", isl.supply_region.members},
        {"committed", isl.solved_region.committed},
        {"corrected", isl.corrected},
        {"energized", isl.island.energized},
        {"restored_buses", isl.island.restored_buses()},
        {"restored_kw", restored},
        {"shed_kw", shed},
        {"restored_by_level", levels},
        {"capacity_kw", tidy(isl.island.capacity)},
        {"served_kw", tidy(isl.island.served)},
        {"objective", tidy(isl.island.objective)},
        {"flow",
         {{"converged", isl.flow.converged},
          {"iterations", isl.flow.iterations},
          {"swing_bus", isl.flow.root},
          {"min_voltage_pu", tidy(vmin)},
          {"max_voltage_pu", tidy(vmax)},
          {"losses_kw", tidy(isl.flow.losses_kw)},
          {"root_injection_kw", tidy(isl.flow.root_injection_kw)}}},
    };
    if (isl.oracle)
      item["oracle"] = {{"agrees", isl.oracle->agrees},
                        {"objective", tidy(isl.oracle->oracle_objective)}};
    islands.push_back(std::move(item));
  }
  doc["islands"] = islands;

  json levels;
  for (const auto& [level, s] : report.per_level)
    levels[to_string(level)] = {{"total_kw", tidy(s.total_kw)},
                                {"restored_kw", tidy(s.restored_kw)},
                                {"ratio_percent", s.ratio_percent}};
  doc["per_level"] = levels;
  doc["objective"] = tidy(report.objective());
  doc["violations"] = report.violations;
  doc["notes"] = report.notes;
  return doc.dump(2) + "\n";
}

std::string emit_dot(const PartitionReport& report, const Network& net) {
  const Network faulted = apply_faults(net, report.scenario);
  std::set<BusId> dg_buses;
  for (const auto& dg : net.dgs()) dg_buses.insert(dg.bus);

  std::ostringstream out;
  out << "graph islanding {\n";
  out << "  node [shape=circle, fontsize=10];\n";
  std::set<BusId> placed;
  for (const auto& isl : report.islands) {
    out << "  subgraph cluster_island_" << isl.id << " {\n";
    out << "    label=\"Island " << isl.id << ": "
        << join(isl.island.dgs, ", ") << "\";\n";
    for (BusId b : isl.island.energized) {
      out << "    " << b << ";\n";
      placed.insert(b);
    }
    out << "  }\n";
  }
  for (const Bus& b : net.buses()) {
    out << "  " << b.id;
    std::vector<std::string> attrs;
    if (dg_buses.count(b.id)) attrs.push_back("shape=box");
    if (b.id == net.slack_bus()) attrs.push_back("shape=doublecircle");
    if (!placed.count(b.id) && b.id != net.slack_bus())
      attrs.push_back("style=dotted");
    if (!attrs.empty()) out << " [" << join(attrs, ", ") << "]";
    out << ";\n";
  }
  for (const Branch& br : faulted.branches()) {
    out << "  " << br.from << " -- " << br.to;
    if (!br.closed()) out << " [style=dashed, color=red]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string emit(const PartitionReport& report, const Network& net,
                 ReportFormat format) {
  switch (format) {
    case ReportFormat::Table:
      return emit_table(report);
    case ReportFormat::Json:
      return emit_json(report);
    case ReportFormat::Dot:
      return emit_dot(report, net);
  }
  return {};
}

}  // namespace islanding
