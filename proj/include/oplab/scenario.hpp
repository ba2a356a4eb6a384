#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oplab/algebra.hpp"
#include "oplab/nclp.hpp"

namespace oplab {

inline constexpr int kScenarioVersion = 1;

struct Scenario {
    int version = kScenarioVersion;
    AlgebraRef algebra;
    std::optional<Operator> hamiltonian;
    double beta = 1.0;
    std::vector<Operator> perturbations;
    PIndex p = PIndex::finite(2.0);
    double lambda = 0.5;   // may be infinite
    std::vector<std::string> suites;
    std::optional<std::uint64_t> seed;
    int boundary_samples = 1000;
    int trials = 100;
    std::map<std::string, double> tolerance_overrides;
};

// Validates against the shipped scenario schema; errors carry a JSON path such as $.perturbations[1][0][2].
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);
// the bundled scenario, identical to scenarios/default.json
const nlohmann::json& default_scenario_json();

// Operators are arrays of blocks, blocks are arrays of rows, entries are numbers or [re, im] pairs.
Operator operator_from_json(const nlohmann::json& j, const AlgebraRef& alg, const std::string& path);
nlohmann::json operator_to_json(const Operator& a);

} // namespace oplab
