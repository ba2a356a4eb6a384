#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "oplab/suites.hpp"

namespace oplab {

inline constexpr int kReportSchemaVersion = 1;

// non-finite numbers are written as the strings "inf", "-inf" and "nan"
nlohmann::json report_to_json(const Report& report);
// validates against the report schema; errors carry a JSON path
Report report_from_json(const nlohmann::json& j);

void emit_json(const Report& report, std::ostream& out);
// one row per check: suite,check,lhs,rhs,residual,tolerance,passed,runtime_ms
void emit_csv(const Report& report, std::ostream& out);

} // namespace oplab
