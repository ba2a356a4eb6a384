#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oplab/report.hpp"
#include "oplab/scenario.hpp"

namespace oplab {

struct SuiteRecord {
    std::string suite;
    CheckRecord check;
    double runtime_ms = 0.0;
};

struct Report {
    std::vector<SuiteRecord> records;
    std::string version = OPLAB_VERSION;
    std::optional<std::uint64_t> seed;

    bool overall() const;
};

const std::vector<std::string>& suite_names();
bool is_suite_name(const std::string& name);

struct RunOptions {
    double tol_scale = 1.0;
    bool parallel = false;
};

// "all" expands to every registered suite; duplicates run once
std::vector<std::string> expand_suites(const std::vector<std::string>& names);
std::vector<SuiteRecord> run_suite(const std::string& name, const Scenario& scenario);
Report run_suites(const std::vector<std::string>& names, const Scenario& scenario, const RunOptions& opt = {});

// rescales tolerances and applies per-check overrides; records whose verdict does not
// follow residual <= tolerance keep their verdict
void apply_tolerances(Report& report, double tol_scale, const std::map<std::string, double>& overrides);

} // namespace oplab
