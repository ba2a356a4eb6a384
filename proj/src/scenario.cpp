#include "oplab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "oplab/errors.hpp"
#include "oplab/suites.hpp"

namespace oplab {

using nlohmann::json;

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
}

void require_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw SchemaError(path, "expected an array");
}

double require_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    return j.get<double>();
}

int require_positive_int(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 1 || j.get<long long>() > 1000000)
        throw SchemaError(path, "expected an integer in [1, 1000000]");
    return j.get<int>();
}

// number, or the string "inf"
double number_or_inf(const json& j, const std::string& path) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return kInf;
        throw SchemaError(path, "expected a number or \"inf\"");
    }
    return require_number(j, path);
}

AlgebraRef algebra_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    for (const auto& [key, _] : j.items())
        if (key != "blocks") throw SchemaError(at(path, key), "unknown key");
    if (!j.contains("blocks")) throw SchemaError(at(path, "blocks"), "required");
    const json& blocks = j.at("blocks");
    const std::string bpath = at(path, "blocks");
    require_array(blocks, bpath);
    if (blocks.empty()) throw SchemaError(bpath, "at least one block required");
    std::vector<Block> out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string p = at(bpath, i);
        require_object(blocks[i], p);
        for (const auto& [key, _] : blocks[i].items())
            if (key != "dim" && key != "weight") throw SchemaError(at(p, key), "unknown key");
        if (!blocks[i].contains("dim")) throw SchemaError(at(p, "dim"), "required");
        int dim = require_positive_int(blocks[i].at("dim"), at(p, "dim"));
        if (dim > 64) throw SchemaError(at(p, "dim"), "block dimension above 64");
        double w = 1.0;
        if (blocks[i].contains("weight")) {
            w = require_number(blocks[i].at("weight"), at(p, "weight"));
            if (!(w > 0.0) || !std::isfinite(w)) throw SchemaError(at(p, "weight"), "weight must be positive");
        }
        out.push_back(Block{dim, w});
    }
    return BlockAlgebra::make(std::move(out));
}

Complex entry_from_json(const json& j, const std::string& path) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw SchemaError(path, "expected a number or a [re, im] pair");
}

} // namespace

Operator operator_from_json(const json& j, const AlgebraRef& alg, const std::string& path) {
    require_array(j, path);
    if (j.size() != alg->num_blocks())
        throw SchemaError(path, "expected " + std::to_string(alg->num_blocks()) + " blocks");
    std::vector<Matrix> blocks;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string bp = at(path, k);
        const int d = alg->dim(k);
        require_array(j[k], bp);
        if (static_cast<int>(j[k].size()) != d) throw SchemaError(bp, "expected " + std::to_string(d) + " rows");
        Matrix m(d, d);
        for (int r = 0; r < d; ++r) {
            const std::string rp = at(bp, static_cast<std::size_t>(r));
            require_array(j[k][r], rp);
            if (static_cast<int>(j[k][r].size()) != d)
                throw SchemaError(rp, "expected " + std::to_string(d) + " entries");
            for (int c = 0; c < d; ++c) m(r, c) = entry_from_json(j[k][r][c], at(rp, static_cast<std::size_t>(c)));
        }
        blocks.push_back(std::move(m));
    }
    return Operator(alg, std::move(blocks));
}

json operator_to_json(const Operator& a) {
    json out = json::array();
    for (const auto& b : a.blocks()) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < b.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < b.cols(); ++c) {
                if (b(r, c).imag() == 0.0)
                    row.push_back(b(r, c).real());
                else
                    row.push_back(json::array({b(r, c).real(), b(r, c).imag()}));
            }
            rows.push_back(std::move(row));
        }
        out.push_back(std::move(rows));
    }
    return out;
}

Scenario parse_scenario(const json& j) {
    static const std::set<std::string> known = {"version", "algebra", "hamiltonian", "beta", "perturbations", "p",
                                                "lambda", "suites", "seed", "boundary_samples", "trials",
                                                "tolerance_overrides"};
    const std::string root = "$";
    require_object(j, root);
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw SchemaError(at(root, key), "unknown key");
    for (const char* key : {"version", "algebra", "suites"})
        if (!j.contains(key)) throw SchemaError(at(root, key), "required");

    Scenario s;
    if (!j.at("version").is_number_integer() || j.at("version").get<int>() != kScenarioVersion)
        throw SchemaError(at(root, "version"), "unsupported version (expected " + std::to_string(kScenarioVersion) + ")");
    s.algebra = algebra_from_json(j.at("algebra"), at(root, "algebra"));

    if (j.contains("hamiltonian")) {
        Operator h = operator_from_json(j.at("hamiltonian"), s.algebra, at(root, "hamiltonian"));
        if (!is_hermitian(h)) throw SchemaError(at(root, "hamiltonian"), "must be hermitian");
        s.hamiltonian = h;
    }
    if (j.contains("beta")) {
        s.beta = require_number(j.at("beta"), at(root, "beta"));
        if (s.beta == 0.0 || !std::isfinite(s.beta)) throw SchemaError(at(root, "beta"), "must be finite and non-zero");
    }
    if (j.contains("perturbations")) {
        const std::string pp = at(root, "perturbations");
        require_array(j.at("perturbations"), pp);
        for (std::size_t i = 0; i < j.at("perturbations").size(); ++i)
            s.perturbations.push_back(operator_from_json(j.at("perturbations")[i], s.algebra, at(pp, i)));
    }
    if (j.contains("p")) {
        double p = number_or_inf(j.at("p"), at(root, "p"));
        if (!(p >= 1.0)) throw SchemaError(at(root, "p"), "must be >= 1");
        s.p = std::isinf(p) ? PIndex::infinity() : PIndex::finite(p);
    }
    if (j.contains("lambda")) {
        s.lambda = number_or_inf(j.at("lambda"), at(root, "lambda"));
        if (!(s.lambda > 0.0)) throw SchemaError(at(root, "lambda"), "must be > 0");
    }

    const std::string sp = at(root, "suites");
    require_array(j.at("suites"), sp);
    for (std::size_t i = 0; i < j.at("suites").size(); ++i) {
        const json& name = j.at("suites")[i];
        if (!name.is_string()) throw SchemaError(at(sp, i), "expected a suite name");
        const std::string n = name.get<std::string>();
        if (n != "all" && !is_suite_name(n)) throw SchemaError(at(sp, i), "unknown suite '" + n + "'");
        s.suites.push_back(n);
    }

    if (j.contains("seed")) {
        const json& sd = j.at("seed");
        if (!sd.is_number_unsigned() && !(sd.is_number_integer() && sd.get<long long>() >= 0))
            throw SchemaError(at(root, "seed"), "expected a nonnegative integer");
        s.seed = sd.get<std::uint64_t>();
    }
    if (j.contains("boundary_samples"))
        s.boundary_samples = require_positive_int(j.at("boundary_samples"), at(root, "boundary_samples"));
    if (j.contains("trials")) s.trials = require_positive_int(j.at("trials"), at(root, "trials"));
    if (j.contains("tolerance_overrides")) {
        const std::string tp = at(root, "tolerance_overrides");
        require_object(j.at("tolerance_overrides"), tp);
        for (const auto& [key, val] : j.at("tolerance_overrides").items()) {
            double t = require_number(val, at(tp, key));
            if (!(t >= 0.0)) throw SchemaError(at(tp, key), "tolerance must be nonnegative");
            s.tolerance_overrides[key] = t;
        }
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw SchemaError("$", std::string("not valid JSON: ") + e.what());
    }
    return parse_scenario(j);
}

const json& default_scenario_json() {
    static const json j = json::parse(R"({
  "version": 1,
  "algebra": {"blocks": [{"dim": 2, "weight": 1.0}]},
  "hamiltonian": [[[1.0, 0.0], [0.0, -1.0]]],
  "beta": 1.0,
  "perturbations": [[[[0.3, [0.2, -0.1]], [[0.2, 0.1], -0.4]]]],
  "p": 2,
  "lambda": 0.5,
  "suites": ["all"],
  "seed": 20240601,
  "boundary_samples": 1000,
  "trials": 100
})");
    return j;
}

} // namespace oplab
