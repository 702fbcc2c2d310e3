#pragma once

#include <string>
#include <vector>

#include "islanding/grid_model.hpp"
#include "islanding/pipeline.hpp"

namespace islanding {

enum class ReportFormat { Table, Json, Dot };

/// Current version of the JSON report layout (the "schema" key).
inline constexpr const char* kReportSchema = "islanding-report/1";

/// "4-9, 36-37, 40-41" style compression of ascending bus ids.
std::string format_ranges(const std::vector<BusId>& buses);

/// Island and restoration tables, plain text.
std::string emit_table(const PartitionReport& report);

/// Stable JSON document; keys are sorted and kW values rounded to 1e-6.
std::string emit_json(const PartitionReport& report);

/// Post-fault graph with one cluster per island. Faulted branches are
/// dashed, DG buses are boxes. `net` is the unfaulted case.
std::string emit_dot(const PartitionReport& report, const Network& net);

std::string emit(const PartitionReport& report, const Network& net,
                 ReportFormat format);

}  // namespace islanding
