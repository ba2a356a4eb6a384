#include "oplab/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "oplab/errors.hpp"

namespace oplab {

using nlohmann::json;

namespace {

json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double read_number(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        if (s == "nan") return std::nan("");
    }
    throw SchemaError(path, "expected a number or one of \"inf\", \"-inf\", \"nan\"");
}

const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) throw SchemaError(path + "." + key, "required");
    return obj.at(key);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

json report_to_json(const Report& report) {
    json records = json::array();
    for (const auto& r : report.records) {
        records.push_back(json{{"suite", r.suite},
                               {"check", r.check.name},
                               {"lhs", number(r.check.lhs)},
                               {"rhs", number(r.check.rhs)},
                               {"residual", number(r.check.residual)},
                               {"tolerance", number(r.check.tolerance)},
                               {"passed", r.check.passed},
                               {"runtime_ms", number(r.runtime_ms)}});
    }
    json env{{"version", report.version}};
    env["seed"] = report.seed ? json(*report.seed) : json(nullptr);
    return json{{"schema_version", kReportSchemaVersion},
                {"overall", report.overall()},
                {"environment", env},
                {"records", records}};
}

Report report_from_json(const json& j) {
    const std::string root = "$";
    if (!j.is_object()) throw SchemaError(root, "expected an object");
    static const std::set<std::string> top = {"schema_version", "overall", "environment", "records"};
    for (const auto& [key, _] : j.items())
        if (!top.count(key)) throw SchemaError(root + "." + key, "unknown key");
    const json& ver = field(j, "schema_version", root);
    if (!ver.is_number_integer() || ver.get<int>() != kReportSchemaVersion)
        throw SchemaError(root + ".schema_version", "unsupported report schema version");
    const json& overall = field(j, "overall", root);
    if (!overall.is_boolean()) throw SchemaError(root + ".overall", "expected a boolean");

    Report rep;
    const json& env = field(j, "environment", root);
    if (!env.is_object()) throw SchemaError(root + ".environment", "expected an object");
    const json& v = field(env, "version", root + ".environment");
    if (!v.is_string()) throw SchemaError(root + ".environment.version", "expected a string");
    rep.version = v.get<std::string>();
    const json& seed = field(env, "seed", root + ".environment");
    if (seed.is_number_unsigned())
        rep.seed = seed.get<std::uint64_t>();
    else if (!seed.is_null())
        throw SchemaError(root + ".environment.seed", "expected a nonnegative integer or null");

    const json& records = field(j, "records", root);
    if (!records.is_array()) throw SchemaError(root + ".records", "expected an array");
    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::string p = root + ".records[" + std::to_string(i) + "]";
        const json& r = records[i];
        if (!r.is_object()) throw SchemaError(p, "expected an object");
        SuiteRecord sr;
        const json& suite = field(r, "suite", p);
        const json& check = field(r, "check", p);
        const json& passed = field(r, "passed", p);
        if (!suite.is_string()) throw SchemaError(p + ".suite", "expected a string");
        if (!check.is_string()) throw SchemaError(p + ".check", "expected a string");
        if (!passed.is_boolean()) throw SchemaError(p + ".passed", "expected a boolean");
        sr.suite = suite.get<std::string>();
        sr.check.name = check.get<std::string>();
        sr.check.passed = passed.get<bool>();
        sr.check.lhs = read_number(field(r, "lhs", p), p + ".lhs");
        sr.check.rhs = read_number(field(r, "rhs", p), p + ".rhs");
        sr.check.residual = read_number(field(r, "residual", p), p + ".residual");
        sr.check.tolerance = read_number(field(r, "tolerance", p), p + ".tolerance");
        sr.runtime_ms = read_number(field(r, "runtime_ms", p), p + ".runtime_ms");
        rep.records.push_back(std::move(sr));
    }
    if (overall.get<bool>() != rep.overall()) throw SchemaError(root + ".overall", "disagrees with the records");
    return rep;
}

void emit_json(const Report& report, std::ostream& out) {
    out << report_to_json(report).dump(2) << '\n';
    if (!out) throw Error("failed to write the JSON report");
}

void emit_csv(const Report& report, std::ostream& out) {
    out << "suite,check,lhs,rhs,residual,tolerance,passed,runtime_ms\n";
    for (const auto& r : report.records) {
        out << csv_field(r.suite) << ',' << csv_field(r.check.name) << ',' << csv_number(r.check.lhs) << ','
            << csv_number(r.check.rhs) << ',' << csv_number(r.check.residual) << ','
            << csv_number(r.check.tolerance) << ',' << (r.check.passed ? "true" : "false") << ','
            << csv_number(r.runtime_ms) << '\n';
    }
    if (!out) throw Error("failed to write the CSV report");
}

} // namespace oplab
