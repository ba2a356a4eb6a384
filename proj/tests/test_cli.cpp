#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "oplab/errors.hpp"
#include "oplab/json_io.hpp"
#include "oplab/scenario.hpp"
#include "oplab/suites.hpp"

using namespace oplab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path scratch() {
    fs::path dir = fs::temp_directory_path() / "oplab_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    const fs::path err = scratch() / "stderr.txt";
    std::string cmd = std::string(OPLAB_CLI_PATH) + " " + args + " 2>" + err.string();
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
}

fs::path write_scenario(const std::string& name, const json& j) {
    fs::path p = scratch() / name;
    std::ofstream(p) << j.dump(2);
    return p;
}

json strip_runtime(json j) {
    for (auto& r : j["records"]) r.erase("runtime_ms");
    return j;
}

} // namespace

TEST_CASE("run a passing suite") {
    RunResult r = run_cli("run kms --seed 11");
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["overall"] == true);
    CHECK(j["environment"]["seed"] == 11);
    CHECK(!j["records"].empty());
    for (const auto& rec : j["records"]) CHECK(rec["suite"] == "kms");
    Report back = report_from_json(j);
    CHECK(back.overall());
}

TEST_CASE("reports are deterministic apart from runtimes") {
    RunResult a = run_cli("run --suite modular --suite relmod-rn --seed 5");
    RunResult b = run_cli("run modular relmod-rn --seed 5");
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(strip_runtime(json::parse(a.out)).dump() == strip_runtime(json::parse(b.out)).dump());
    RunResult c = run_cli("run modular relmod-rn --seed 6");
    CHECK(strip_runtime(json::parse(a.out)).dump() != strip_runtime(json::parse(c.out)).dump());
}

TEST_CASE("empty suite list") {
    json sc = default_scenario_json();
    sc["suites"] = json::array();
    RunResult r = run_cli("run --scenario " + write_scenario("empty.json", sc).string());
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["overall"] == true);
    CHECK(j["records"].empty());

    Report rep = run_suites({}, parse_scenario(sc));
    CHECK(rep.records.empty());
    CHECK(rep.overall());
}

TEST_CASE("failing check gives exit code 1") {
    RunResult r = run_cli("run paper-examples");
    CHECK(r.code == 1);
    json j = json::parse(r.out);
    CHECK(j["overall"] == false);
    int failed = 0;
    for (const auto& rec : j["records"]) failed += rec["passed"] == false;
    CHECK(failed >= 1);
}

TEST_CASE("csv output") {
    RunResult js = run_cli("run cones --seed 3");
    RunResult cs = run_cli("run cones --seed 3 --format csv");
    REQUIRE(cs.code == 0);
    std::istringstream in(cs.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "suite,check,lhs,rhs,residual,tolerance,passed,runtime_ms");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        CHECK(line.rfind("cones,", 0) == 0);
        CHECK(std::count(line.begin(), line.end(), ',') == 7);
        ++rows;
    }
    CHECK(rows == json::parse(js.out)["records"].size());
    CHECK(run_cli("run cones --format xml").code == 2);
}

TEST_CASE("output file") {
    fs::path out = scratch() / "report.json";
    fs::remove(out);
    RunResult r = run_cli("run cones -o " + out.string());
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(report_from_json(json::parse(slurp(out))).overall());
}

TEST_CASE("scenario errors carry a path") {
    json bad = default_scenario_json();
    bad["perturbations"][0][0][1][0] = "x";
    RunResult r = run_cli("run --scenario " + write_scenario("bad.json", bad).string());
    CHECK(r.code == 2);
    CHECK(r.err.find("$.perturbations[0][0][1][0]") != std::string::npos);

    json extra = default_scenario_json();
    extra["colour"] = 1;
    RunResult e = run_cli("validate " + write_scenario("extra.json", extra).string());
    CHECK(e.code == 2);
    CHECK(e.err.find("$.colour") != std::string::npos);

    json unknown = default_scenario_json();
    unknown["suites"] = json::array({"kms", "nope"});
    RunResult u = run_cli("validate " + write_scenario("unknown.json", unknown).string());
    CHECK(u.code == 2);
    CHECK(u.err.find("$.suites[1]") != std::string::npos);

    CHECK(run_cli("run no-such-suite").code == 2);

    fs::path garbage = scratch() / "garbage.json";
    std::ofstream(garbage) << "{ not json";
    CHECK(run_cli("validate " + garbage.string()).code == 2);
    CHECK_THROWS_AS(parse_scenario(bad), SchemaError);
}

TEST_CASE("shipped default scenario") {
    fs::path shipped = fs::path(OPLAB_SOURCE_DIR) / "scenarios" / "default.json";
    CHECK(json::parse(slurp(shipped)) == default_scenario_json());
    RunResult v = run_cli("validate " + shipped.string());
    CHECK(v.code == 0);
    CHECK(v.out == "ok\n");
    CHECK(json::parse(run_cli("default-scenario").out) == default_scenario_json());
    RunResult l = run_cli("list");
    for (const auto& s : suite_names()) CHECK(l.out.find(s) != std::string::npos);
}

TEST_CASE("report json round trip") {
    Report rep;
    rep.seed = 9;
    rep.records.push_back({"dyson", CheckRecord{"a", 1.0, 2.0, 1e-13, 1e-12, true}, 0.5});
    rep.records.push_back({"expclass", CheckRecord{"b", kInf, -kInf, kInf, 1.0, false}, 0.0});
    json j = report_to_json(rep);
    CHECK(j["records"][1]["lhs"] == "inf");
    Report back = report_from_json(j);
    CHECK(report_to_json(back) == j);
    CHECK_FALSE(back.overall());

    json lying = j;
    lying["overall"] = true;
    CHECK_THROWS_AS(report_from_json(lying), SchemaError);
    json missing = j;
    missing["records"][0].erase("residual");
    CHECK_THROWS_AS(report_from_json(missing), SchemaError);
}
