/*
 Copyright 2026 The optload Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "optload_cli/config.hpp"

#include <fstream>
#include <set>
#include <vector>

namespace optload::cli {

using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw ConfigError(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(path + "." + key, "required field is missing");
    return *it;
}

const json* optional_field(const json& obj, const std::string& key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) throw ConfigError(path + "." + key, "unknown field");
    }
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
    return v;
}

std::size_t count(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0) {
        throw ConfigError(path, "expected a nonnegative integer");
    }
    return j.get<std::size_t>();
}

std::string text(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

Eigen::VectorXd vector(const json& j, const std::string& path) {
    if (j.is_number()) return Eigen::VectorXd::Constant(1, number(j, path));
    if (!j.is_array()) throw ConfigError(path, "expected a number or an array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = number(j[i], path + "[" + std::to_string(i) + "]");
    }
    return v;
}

// Row-major nested arrays; a bare number is a 1 x 1 matrix and [] is 0 x 0.
Eigen::MatrixXd matrix(const json& j, const std::string& path) {
    if (j.is_number()) return Eigen::MatrixXd::Constant(1, 1, number(j, path));
    if (!j.is_array()) throw ConfigError(path, "expected a matrix (array of rows)");
    if (j.empty()) return Eigen::MatrixXd(0, 0);
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        if (!j[r].is_array()) throw ConfigError(rp, "expected a row array");
        if (r == 0) cols = j[r].size();
        if (j[r].size() != cols) throw ConfigError(rp, "rows have different lengths");
    }
    Eigen::MatrixXd M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                number(j[r][c], path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
        }
    }
    return M;
}

std::vector<std::string> strings(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of expression strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(text(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

ConstantMap constants(const json& sys, const std::string& path) {
    ConstantMap out;
    const json* c = optional_field(sys, "constants");
    if (c == nullptr) return out;
    if (!c->is_object()) throw ConfigError(path + ".constants", "expected an object of numbers");
    for (const auto& [key, value] : c->items()) out[key] = number(value, path + ".constants." + key);
    return out;
}

Expr expression(const std::string& src, std::size_t n, std::size_t m, const ConstantMap& k,
                const std::string& path) {
    try {
        return Expr::parse(src, n, m, k);
    } catch (const ParseError& e) {
        throw ConfigError(path, e.what());
    }
}

// Empty B/C blocks of a stateless linear system carry the io dimension.
void fix_stateless(LinearSystem& lin) {
    if (lin.A.size() == 0) {
        lin.A.resize(0, 0);
        lin.B.resize(0, lin.D.rows());
        lin.C.resize(lin.D.rows(), 0);
    }
}

template <class F>
auto wrap(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        if (e.category() != ErrorCategory::Config) throw;
        throw ConfigError(path, e.what());
    }
}

struct SystemBlock {
    GenericSystem system;
    std::optional<StructuredSystem> structured;
};

SystemBlock parse_system(const json& sys, const std::string& path) {
    const std::string type = text(require(sys, "type", path), path + ".type");
    const ConstantMap k = constants(sys, path);
    auto mat = [&](const char* key) { return matrix(require(sys, key, path), path + "." + key); };

    if (type == "generic") {
        reject_unknown(sys, path, {"type", "n", "m", "f", "h", "constants"});
        const std::size_t n = count(require(sys, "n", path), path + ".n");
        const std::size_t m = count(require(sys, "m", path), path + ".m");
        const auto f = strings(require(sys, "f", path), path + ".f");
        const auto h = strings(require(sys, "h", path), path + ".h");
        std::vector<Expr> fe;
        std::vector<Expr> he;
        for (std::size_t i = 0; i < f.size(); ++i) {
            fe.push_back(expression(f[i], n, m, k, path + ".f[" + std::to_string(i) + "]"));
        }
        for (std::size_t i = 0; i < h.size(); ++i) {
            he.push_back(expression(h[i], n, m, k, path + ".h[" + std::to_string(i) + "]"));
        }
        return wrap(path, [&] { return SystemBlock{GenericSystem(n, m, fe, he), std::nullopt}; });
    }
    if (type == "linear") {
        reject_unknown(sys, path, {"type", "A", "B", "C", "D", "constants"});
        LinearSystem lin{mat("A"), mat("B"), mat("C"), mat("D")};
        fix_stateless(lin);
        return wrap(path, [&] { return SystemBlock{to_generic(lin), lin}; });
    }
    if (type == "port_hamiltonian_linear") {
        reject_unknown(sys, path, {"type", "J", "R", "Q", "B", "D", "constants"});
        PortHamiltonianLinear ph{mat("J"), mat("R"), mat("Q"), mat("B"), mat("D")};
        return wrap(path, [&] { return SystemBlock{to_generic(ph), ph}; });
    }
    if (type == "gradient_linear") {
        reject_unknown(sys, path, {"type", "G", "P", "C", "D", "constants"});
        GradientLinear g{mat("G"), mat("P"), mat("C"), mat("D")};
        return wrap(path, [&] { return SystemBlock{to_generic(g), g}; });
    }
    if (type == "port_hamiltonian") {
        reject_unknown(sys, path, {"type", "J", "R", "B", "D", "H", "constants"});
        const Eigen::MatrixXd J = mat("J");
        const Eigen::MatrixXd D = mat("D");
        const auto n = static_cast<std::size_t>(J.rows());
        const auto m = static_cast<std::size_t>(D.rows());
        PortHamiltonianNonlinear ph{J, mat("R"), mat("B"), D,
                                    expression(text(require(sys, "H", path), path + ".H"), n, m, k, path + ".H")};
        return wrap(path, [&] { return SystemBlock{to_generic(ph), ph}; });
    }
    if (type == "gradient") {
        reject_unknown(sys, path, {"type", "G", "V", "m", "constants"});
        const Eigen::MatrixXd G = mat("G");
        const std::size_t m = count(require(sys, "m", path), path + ".m");
        GradientNonlinear g{G, expression(text(require(sys, "V", path), path + ".V"),
                                          static_cast<std::size_t>(G.rows()), m, k, path + ".V")};
        return wrap(path, [&] { return SystemBlock{to_generic(g), g}; });
    }
    if (type == "static") {
        reject_unknown(sys, path, {"type", "h", "constants"});
        const auto h = strings(require(sys, "h", path), path + ".h");
        StaticNonlinearity s;
        for (std::size_t i = 0; i < h.size(); ++i) {
            s.h.push_back(expression(h[i], 0, h.size(), k, path + ".h[" + std::to_string(i) + "]"));
        }
        return wrap(path, [&] { return SystemBlock{to_generic(s), s}; });
    }
    throw ConfigError(path + ".type", "unknown system type '" + type + "'");
}

SourceSignal parse_source(const json& src, const std::string& path) {
    const std::string type = text(require(src, "type", path), path + ".type");
    return wrap(path, [&]() -> SourceSignal {
        if (type == "constant") {
            reject_unknown(src, path, {"type", "value"});
            return SourceSignal::constant(vector(require(src, "value", path), path + ".value"));
        }
        if (type == "sinusoid") {
            reject_unknown(src, path, {"type", "amplitude", "omega", "phase"});
            const Eigen::VectorXd a = vector(require(src, "amplitude", path), path + ".amplitude");
            const json* ph = optional_field(src, "phase");
            return SourceSignal::sinusoid(a, vector(require(src, "omega", path), path + ".omega"),
                                          ph ? vector(*ph, path + ".phase") : Eigen::VectorXd::Zero(a.size()));
        }
        if (type == "piecewise_linear") {
            reject_unknown(src, path, {"type", "knots"});
            const json& knots = require(src, "knots", path);
            if (!knots.is_array()) throw ConfigError(path + ".knots", "expected an array of knots");
            std::vector<SourceSignal::Knot> out;
            for (std::size_t i = 0; i < knots.size(); ++i) {
                const std::string kp = path + ".knots[" + std::to_string(i) + "]";
                out.push_back({number(require(knots[i], "t", kp), kp + ".t"),
                               vector(require(knots[i], "value", kp), kp + ".value")});
            }
            return SourceSignal::piecewise_linear(std::move(out));
        }
        if (type == "sum") {
            reject_unknown(src, path, {"type", "terms"});
            const json& terms = require(src, "terms", path);
            if (!terms.is_array()) throw ConfigError(path + ".terms", "expected an array of sources");
            std::vector<SourceSignal> out;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                out.push_back(parse_source(terms[i], path + ".terms[" + std::to_string(i) + "]"));
            }
            return SourceSignal::sum(std::move(out));
        }
        throw ConfigError(path + ".type", "unknown source type '" + type + "'");
    });
}

}  // namespace

RunConfig parse_config(const json& doc, const std::string& name) {
    if (!doc.is_object()) throw ConfigError("$", "expected a JSON object");
    reject_unknown(doc, "$", {"name", "system", "source", "problem", "verify", "oracle", "outputs"});

    SystemBlock sys = parse_system(require(doc, "system", "$"), "$.system");
    SourceSignal source = parse_source(require(doc, "source", "$"), "$.source");

    const json& pb = require(doc, "problem", "$");
    reject_unknown(pb, "$.problem", {"x0", "T", "N", "seed", "tolerances"});
    const json* x0j = optional_field(pb, "x0");
    Eigen::VectorXd x0 = x0j ? vector(*x0j, "$.problem.x0")
                             : Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.system.state_dim()));
    if (x0j && x0j->is_array() && x0j->empty()) x0.resize(0);

    RunConfig cfg{name, sys.system, sys.structured, source, x0, 1.0, 1000, 0, {}, {}, {}, {}};
    if (const json* n = optional_field(doc, "name")) cfg.name = text(*n, "$.name");
    cfg.T = number(require(pb, "T", "$.problem"), "$.problem.T");
    if (const json* N = optional_field(pb, "N")) cfg.N = count(*N, "$.problem.N");
    if (const json* s = optional_field(pb, "seed")) cfg.seed = count(*s, "$.problem.seed");
    if (const json* tol = optional_field(pb, "tolerances")) {
        const std::string tp = "$.problem.tolerances";
        reject_unknown(*tol, tp, {"shooting", "newton", "max_shooting_iterations", "fd_step"});
        if (const json* v = optional_field(*tol, "shooting")) cfg.solver.shooting_tolerance = number(*v, tp + ".shooting");
        if (const json* v = optional_field(*tol, "newton")) cfg.solver.newton.tolerance = number(*v, tp + ".newton");
        if (const json* v = optional_field(*tol, "max_shooting_iterations")) {
            cfg.solver.max_shooting_iterations = count(*v, tp + ".max_shooting_iterations");
        }
        if (const json* v = optional_field(*tol, "fd_step")) cfg.solver.fd_step = number(*v, tp + ".fd_step");
    }

    if (const json* v = optional_field(doc, "verify")) {
        reject_unknown(*v, "$.verify", {"trials", "magnitude"});
        if (const json* t = optional_field(*v, "trials")) cfg.verify.trials = count(*t, "$.verify.trials");
        if (const json* m = optional_field(*v, "magnitude")) cfg.verify.magnitude = number(*m, "$.verify.magnitude");
    }
    if (const json* o = optional_field(doc, "oracle")) {
        reject_unknown(*o, "$.oracle", {"max_iterations", "initial_step", "gradient_tolerance"});
        if (const json* t = optional_field(*o, "max_iterations")) {
            cfg.oracle.max_iterations = count(*t, "$.oracle.max_iterations");
        }
        if (const json* t = optional_field(*o, "initial_step")) {
            cfg.oracle.initial_step = number(*t, "$.oracle.initial_step");
        }
        if (const json* t = optional_field(*o, "gradient_tolerance")) {
            cfg.oracle.gradient_tolerance = number(*t, "$.oracle.gradient_tolerance");
        }
    }
    if (const json* out = optional_field(doc, "outputs")) {
        const std::string op = "$.outputs";
        reject_unknown(*out, op, {"trajectory", "summary", "verify_report", "oracle_trajectory", "oracle_summary",
                                  "load_report", "simulation", "simulation_summary"});
        auto set = [&](const char* key, std::string& field) {
            if (const json* v = optional_field(*out, key)) field = text(*v, op + "." + key);
        };
        set("trajectory", cfg.outputs.trajectory);
        set("summary", cfg.outputs.summary);
        set("verify_report", cfg.outputs.verify_report);
        set("oracle_trajectory", cfg.outputs.oracle_trajectory);
        set("oracle_summary", cfg.outputs.oracle_summary);
        set("load_report", cfg.outputs.load_report);
        set("simulation", cfg.outputs.simulation);
        set("simulation_summary", cfg.outputs.simulation_summary);
    }

    if (!(cfg.T > 0.0)) throw ConfigError("$.problem.T", "horizon must be positive");
    if (cfg.N < 10) throw ConfigError("$.problem.N", "grid needs at least 10 steps");
    if (static_cast<std::size_t>(cfg.x0.size()) != cfg.system.state_dim()) {
        throw ConfigError("$.problem.x0", "dimension " + std::to_string(cfg.x0.size()) +
                                              " does not match the system state dimension " +
                                              std::to_string(cfg.system.state_dim()));
    }
    if (cfg.source.dim() != cfg.system.io_dim()) {
        throw ConfigError("$.source", "dimension " + std::to_string(cfg.source.dim()) +
                                          " does not match the system io dimension " +
                                          std::to_string(cfg.system.io_dim()));
    }
    wrap("$.source", [&] {
        cfg.source.check_covers(cfg.T);
        return 0;
    });
    return cfg;
}

RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open config file " + file.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc, file.stem().string());
}

}  // namespace optload::cli
