#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oplab/errors.hpp"
#include "oplab/json_io.hpp"
#include "oplab/scenario.hpp"
#include "oplab/suites.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string suite_list() {
    std::string s;
    for (const auto& n : oplab::suite_names()) s += "  " + n + "\n";
    return s + "  all\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical verification suites for modular theory, noncommutative Lp spaces and KMS perturbations"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run verification suites and emit a report");
    std::vector<std::string> positional, flagged;
    std::string scenario_path, format = "json", output;
    std::uint64_t seed = 0;
    double tol_scale = 1.0;
    bool parallel = false;
    run->add_option("suites", positional, "Suite names (or 'all'); default: the scenario's list");
    run->add_option("--suite", flagged, "Suite name, repeatable");
    run->add_option("--scenario", scenario_path, "Scenario JSON file; default: the bundled scenario");
    auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    run->add_option("--tol-scale", tol_scale, "Multiply every tolerance")->capture_default_str();
    run->add_flag("--parallel", parallel, "Run independent suites concurrently");
    run->add_option("-o,--output", output, "Write the report to a file instead of stdout");
    run->footer("Suites:\n" + suite_list());

    auto* validate = app.add_subcommand("validate", "Validate a scenario file");
    std::string validate_path;
    validate->add_option("scenario", validate_path, "Scenario JSON file")->required();

    app.add_subcommand("list", "List suite names");
    auto* show = app.add_subcommand("default-scenario", "Print the bundled scenario");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // help and version requests exit 0, usage errors map to the usage code
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (app.got_subcommand("list")) {
            for (const auto& n : oplab::suite_names()) std::cout << n << '\n';
            return 0;
        }
        if (show->parsed()) {
            std::cout << oplab::default_scenario_json().dump(2) << '\n';
            return 0;
        }
        if (validate->parsed()) {
            oplab::load_scenario(validate_path);
            std::cout << "ok\n";
            return 0;
        }

        oplab::Scenario sc = scenario_path.empty() ? oplab::parse_scenario(oplab::default_scenario_json())
                                                   : oplab::load_scenario(scenario_path);
        if (seed_opt->count() > 0) sc.seed = seed;
        std::vector<std::string> names = positional;
        names.insert(names.end(), flagged.begin(), flagged.end());
        if (names.empty()) names = sc.suites;

        oplab::Report report = oplab::run_suites(names, sc, oplab::RunOptions{tol_scale, parallel});

        std::ofstream file;
        if (!output.empty()) {
            file.open(output);
            if (!file) throw oplab::Error("cannot open output file '" + output + "'");
        }
        std::ostream& out = output.empty() ? std::cout : file;
        if (format == "csv")
            oplab::emit_csv(report, out);
        else
            oplab::emit_json(report, out);
        return report.overall() ? 0 : kExitFail;
    } catch (const oplab::SchemaError& e) {
        std::cerr << "scenario error at " << e.what() << '\n';
        return kExitUsage;
    } catch (const oplab::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
