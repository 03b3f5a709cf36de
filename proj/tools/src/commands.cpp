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
#include "optload_cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "optload/loads.hpp"
#include "optload/power.hpp"
#include "optload/solver.hpp"
#include "optload/variational.hpp"

namespace optload::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kResidualTol = 1e-6;
constexpr double kMarginTol = -1e-8;
constexpr double kDualityTol = 1e-6;
constexpr double kStructureTol = 1e-6;
constexpr double kConsistencyTol = 1e-6;

std::string category_name(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Config: return "config";
        case ErrorCategory::Solver: return "solver";
        case ErrorCategory::Io: return "io";
    }
    return "unknown";
}

std::string fmt(double v, bool full) {
    char buf[40];
    std::snprintf(buf, sizeof buf, full ? "%.17g" : "%.12g", v);
    return buf;
}

fs::path output_path(const CliOptions& opt, const std::string& name) { return opt.out_dir / name; }

void write_file(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

void write_json(const fs::path& path, const json& doc) { write_file(path, doc.dump(2) + "\n"); }

json to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json to_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const PassivityReport& rep) {
    return {{"certificate", to_string(rep.certificate)}, {"minimal_order", rep.minimal_order}, {"notes", rep.notes}};
}

std::string system_class(const RunConfig& cfg) {
    return cfg.structured ? class_name(*cfg.structured) : "generic";
}

PassivityReport passivity_of(const RunConfig& cfg) {
    if (const auto& lin = cfg.system.linear()) return linear_passivity_test(sigma_plus_realization(*lin));
    PassivityReport rep;
    rep.notes.push_back("nonlinear system: minimality is supported empirically only");
    return rep;
}

// Appends name0..name{count-1} to the header.
void header_block(std::ostringstream& os, const char* name, Eigen::Index count) {
    for (Eigen::Index i = 0; i < count; ++i) os << ',' << name << i;
}

void row_block(std::ostringstream& os, const Eigen::MatrixXd& M, Eigen::Index k, bool full) {
    for (Eigen::Index i = 0; i < M.cols(); ++i) os << ',' << fmt(M(k, i), full);
}

Eigen::MatrixXd sampled_source(const RunConfig& cfg, const UniformGrid& grid) {
    return cfg.source.sample(grid.T, grid.N);
}

std::string solution_csv(const RunConfig& cfg, const BvpSolution& sol, const TrajectoryLoad& load, bool full) {
    const Trajectory& tr = sol.traj;
    const Eigen::MatrixXd yS = sampled_source(cfg, tr.grid);
    const auto n = tr.x.cols();
    const auto m = tr.u.cols();
    std::ostringstream os;
    os << 't';
    header_block(os, "x", n);
    header_block(os, "p", n);
    header_block(os, "u", m);
    header_block(os, "y", m);
    header_block(os, "yplus", m);
    header_block(os, "yS", m);
    header_block(os, "yL", m);
    os << '\n';
    for (Eigen::Index k = 0; k < tr.u.rows(); ++k) {
        os << fmt(tr.grid.t(static_cast<std::size_t>(k)), full);
        row_block(os, tr.x, k, full);
        row_block(os, tr.p, k, full);
        row_block(os, tr.u, k, full);
        row_block(os, tr.y, k, full);
        row_block(os, tr.yplus, k, full);
        row_block(os, yS, k, full);
        row_block(os, load.yL, k, full);
        os << '\n';
    }
    return os.str();
}

struct Solved {
    ProblemSpec spec;
    BvpSolution sol;
    TrajectoryLoad load;
    double first_order_residual = 0.0;
};

Solved solve_config(const RunConfig& cfg) {
    ProblemSpec spec = cfg.problem();
    BvpSolution sol = solve_optimal_input(spec);
    TrajectoryLoad load = load_from_solution(spec, sol);
    const double res = residual_first_order(spec, sol);
    return {std::move(spec), std::move(sol), std::move(load), res};
}

json solve_summary(const RunConfig& cfg, const Solved& s) {
    const PassivityReport passivity = passivity_of(cfg);
    return {
        {"name", cfg.name},
        {"system_class", system_class(cfg)},
        {"n", cfg.system.state_dim()},
        {"m", cfg.system.io_dim()},
        {"T", cfg.T},
        {"N", cfg.N},
        {"extracted_energy", s.sol.extracted_energy},
        {"power", -s.sol.extracted_energy},
        {"shooting_residual", s.sol.shooting_residual},
        {"first_order_residual", s.first_order_residual},
        {"load_consistency_error", s.load.consistency_error},
        {"p0", to_json(s.sol.p0)},
        {"iterations", {{"shooting", s.sol.shooting_iterations}, {"newton", s.sol.newton_iterations}}},
        {"certificates",
         {{"passivity", to_json(passivity)},
          {"empirical_only", passivity.certificate != PassivityCertificate::PositiveReal}}},
    };
}

struct Check {
    std::string name;
    std::string status;  // pass, fail, empirical_only, not_applicable
    double value = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

json to_json(const Check& c) {
    return {{"name", c.name}, {"status", c.status}, {"value", c.value}, {"tolerance", c.tolerance}, {"detail", c.detail}};
}

Check bound_check(std::string name, double value, double tol, bool upper = true) {
    const bool ok = upper ? value <= tol : value >= tol;
    return {std::move(name), ok ? "pass" : "fail", value, tol, ""};
}

// Reads the u columns of a trajectory CSV written by `solve`.
std::optional<Eigen::MatrixXd> read_input_columns(const fs::path& path, const std::string& prefix) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string line;
    if (!std::getline(in, line)) return std::nullopt;
    std::vector<std::size_t> cols;
    {
        std::istringstream hs(line);
        std::string cell;
        for (std::size_t i = 0; std::getline(hs, cell, ','); ++i) {
            if (cell.size() > prefix.size() && cell.compare(0, prefix.size(), prefix) == 0 &&
                std::all_of(cell.begin() + static_cast<std::ptrdiff_t>(prefix.size()), cell.end(),
                            [](char c) { return c >= '0' && c <= '9'; })) {
                cols.push_back(i);
            }
        }
    }
    if (cols.empty()) return std::nullopt;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> all;
        while (std::getline(ls, cell, ',')) all.push_back(std::stod(cell));
        std::vector<double> picked;
        for (std::size_t c : cols) {
            if (c >= all.size()) throw IoError("short row in " + path.string());
            picked.push_back(all[c]);
        }
        rows.push_back(std::move(picked));
    }
    Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return M;
}

json structured_json(const StructuredLoad& load) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PortHamiltonianLinear>) {
                return {{"class", "port_hamiltonian_linear"}, {"trajectory_dependent", false},
                        {"J", to_json(v.J)}, {"R", to_json(v.R)}, {"Q", to_json(v.Q)},
                        {"B", to_json(v.B)}, {"D", to_json(v.D)}, {"coordinates", "z = Q^{-1} p"}};
            } else if constexpr (std::is_same_v<T, GradientLinear>) {
                return {{"class", "gradient_linear"}, {"trajectory_dependent", false},
                        {"G", to_json(v.G)}, {"P", to_json(v.P)}, {"C", to_json(v.C)},
                        {"D", to_json(v.D)}, {"coordinates", "z = G^{-1} p"}};
            } else if constexpr (std::is_same_v<T, PortHamiltonianAlongTrajectory>) {
                return {{"class", "port_hamiltonian"}, {"trajectory_dependent", true},
                        {"J", to_json(v.J)}, {"R", to_json(v.R)}, {"B", to_json(v.B)},
                        {"D", to_json(v.D)}, {"samples", v.Q.size()},
                        {"Q_initial", to_json(v.Q.front())}, {"Q_final", to_json(v.Q.back())},
                        {"coordinates", "z = Hess(H)(x(t))^{-1} p"}};
            } else {
                return {{"class", "gradient"}, {"trajectory_dependent", true},
                        {"G", to_json(v.G)}, {"samples", v.Vxx.size()},
                        {"coordinates", "z = G^{-1} p"}};
            }
        },
        load);
}

void apply_overrides(RunConfig& cfg, const CliOptions& opt) {
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.steps) {
        if (*opt.steps < 10) throw ConfigError("--steps", "grid needs at least 10 steps");
        cfg.N = *opt.steps;
    }
    cfg.verify.seed = cfg.seed;
}

int run_one(const std::string& command, const CliOptions& opt, std::ostream& out, std::ostream& err,
            const std::string& label) {
    auto report = [&](const std::string& category, const std::string& message) {
        json e = {{"error", {{"category", category}, {"message", message}}}};
        if (!label.empty()) e["config"] = label;
        err << e.dump() << '\n';
    };
    try {
        RunConfig cfg = load_config(opt.config);
        apply_overrides(cfg, opt);
        if (command == "solve") return run_solve(cfg, opt, out);
        if (command == "verify") return run_verify(cfg, opt, out);
        if (command == "oracle") return run_oracle(cfg, opt, out);
        if (command == "load") return run_load(cfg, opt, out);
        if (command == "simulate") return run_simulate(cfg, opt, out);
        report("config", "unknown command '" + command + "'");
        return kExitConfig;
    } catch (const Error& e) {
        report(category_name(e.category()), e.what());
        return exit_code(e.category());
    } catch (const json::exception& e) {
        report("config", e.what());
        return kExitConfig;
    }
}

}  // namespace

int exit_code(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::Config: return kExitConfig;
        case ErrorCategory::Solver: return kExitSolver;
        case ErrorCategory::Io: return kExitIo;
    }
    return kExitSolver;
}

int run_solve(const RunConfig& cfg, const CliOptions& opt, std::ostream& log) {
    const Solved s = solve_config(cfg);
    write_file(output_path(opt, cfg.outputs.trajectory), solution_csv(cfg, s.sol, s.load, opt.full_precision));
    write_json(output_path(opt, cfg.outputs.summary), solve_summary(cfg, s));
    log << cfg.name << ": extracted_energy " << fmt(s.sol.extracted_energy, true) << ", shooting_residual "
        << fmt(s.sol.shooting_residual, false) << ", first_order_residual " << fmt(s.first_order_residual, false)
        << '\n';
    return kExitOk;
}

int run_verify(const RunConfig& cfg, const CliOptions& opt, std::ostream& log) {
    const Solved s = solve_config(cfg);
    std::vector<Check> checks;

    checks.push_back(bound_check("first_order_residual", s.first_order_residual, kResidualTol));

    const OptimalityReport pert = perturbation_test(cfg.system, cfg.source, cfg.x0, s.sol.traj.grid,
                                                    s.sol.traj.u, cfg.verify);
    Check margin = bound_check("perturbation_margin", pert.perturbation_margin, kMarginTol, false);
    margin.detail = std::to_string(pert.trials) + " trials, magnitude " + fmt(cfg.verify.magnitude, false) +
                    ", seed " + std::to_string(cfg.verify.seed);
    checks.push_back(margin);

    const PassivityReport passivity = passivity_of(cfg);
    Check pc{"passivity", "", 0.0, 0.0, to_string(passivity.certificate)};
    if (!cfg.system.linear()) {
        pc.status = "empirical_only";
    } else if (passivity.certificate == PassivityCertificate::PositiveReal) {
        pc.status = "pass";
    } else if (passivity.certificate == PassivityCertificate::NotApplicable) {
        pc.status = "not_applicable";
    } else {
        pc.status = "fail";
    }
    for (const auto& note : passivity.notes) pc.detail += "; " + note;
    checks.push_back(pc);

    const UniformGrid& grid = s.sol.traj.grid;
    const std::size_t m = cfg.system.io_dim();
    const Eigen::MatrixXd du = random_perturbation(grid, m, 1.0, cfg.seed, 1000001);
    const Eigen::MatrixXd ua = random_perturbation(grid, m, 1.0, cfg.seed, 1000002);
    checks.push_back(bound_check("duality_residual", duality_residual(cfg.system, s.sol.traj, du, ua), kDualityTol));

    checks.push_back(bound_check("load_consistency", s.load.consistency_error, kConsistencyTol));

    if (cfg.structured && !std::holds_alternative<LinearSystem>(*cfg.structured) &&
        !std::holds_alternative<StaticNonlinearity>(*cfg.structured)) {
        Check sc{"structure", "", 0.0, kStructureTol, ""};
        try {
            const StructureReport rep = verify_structure(*cfg.structured, s.sol.traj);
            sc.value = rep.max_discrepancy;
            const bool ok = rep.max_discrepancy <= kStructureTol && rep.structure_preserved;
            sc.status = ok ? "pass" : "fail";
            sc.detail = rep.structure_preserved ? "structure matrices preserved" : "structure matrices violated";
        } catch (const SingularCoordinateChange& e) {
            sc.status = "fail";
            sc.detail = e.what();
        }
        checks.push_back(sc);
    }

    bool passed = true;
    json arr = json::array();
    for (const auto& c : checks) {
        passed = passed && c.status != "fail";
        arr.push_back(to_json(c));
        std::string tag = c.status == "pass" ? "PASS" : c.status == "fail" ? "FAIL" : "INFO";
        log << '[' << tag << "] " << cfg.name << ' ' << c.name << ' ' << c.status << " value=" << fmt(c.value, false)
            << '\n';
    }
    json doc = {{"name", cfg.name}, {"system_class", system_class(cfg)}, {"passed", passed}, {"checks", arr},
                {"summary", solve_summary(cfg, s)}};
    write_json(output_path(opt, cfg.outputs.verify_report), doc);
    return passed ? kExitOk : kExitChecksFailed;
}

int run_oracle(const RunConfig& cfg, const CliOptions& opt, std::ostream& log) {
    const UniformGrid grid{cfg.T, cfg.N};
    const OracleResult res = oracle_minimize(cfg.system, cfg.source, cfg.x0, grid, cfg.oracle);

    std::ostringstream os;
    os << 't';
    header_block(os, "u", res.u.cols());
    os << '\n';
    for (Eigen::Index k = 0; k < res.u.rows(); ++k) {
        os << fmt(grid.t(static_cast<std::size_t>(k)), opt.full_precision);
        row_block(os, res.u, k, opt.full_precision);
        os << '\n';
    }
    write_file(output_path(opt, cfg.outputs.oracle_trajectory), os.str());

    json doc = {{"name", cfg.name},
                {"power", res.power},
                {"extracted_energy", -res.power},
                {"iterations", res.iterations},
                {"gradient_norm", res.gradient_norm},
                {"status", to_string(res.status)},
                {"budget_exhausted", res.status == OracleStatus::BudgetExhausted}};

    // Compare against an earlier `solve` in the same output directory, if any.
    const fs::path traj_file = output_path(opt, cfg.outputs.trajectory);
    const fs::path summary_file = output_path(opt, cfg.outputs.summary);
    if (fs::exists(traj_file) && fs::exists(summary_file)) {
        const auto u_ref = read_input_columns(traj_file, "u");
        std::ifstream sin(summary_file);
        json ref;
        try {
            ref = json::parse(sin);
        } catch (const json::exception&) {
            ref = nullptr;
        }
        if (u_ref && u_ref->rows() == res.u.rows() && u_ref->cols() == res.u.cols() && ref.is_object() &&
            ref.contains("extracted_energy")) {
            const double ref_energy = ref["extracted_energy"].get<double>();
            doc["comparison"] = {{"reference", traj_file.filename().string()},
                                 {"l2_input_distance", l2_norm(grid, res.u - *u_ref)},
                                 {"power_difference", std::abs(-res.power - ref_energy)}};
        }
    }
    write_json(output_path(opt, cfg.outputs.oracle_summary), doc);
    log << cfg.name << ": oracle power " << fmt(res.power, true) << " after " << res.iterations << " iterations ("
        << to_string(res.status) << ")\n";
    if (res.status == OracleStatus::BudgetExhausted) {
        throw NoConvergence("oracle iteration budget exhausted with |grad|_inf = " + fmt(res.gradient_norm, false) +
                            "; best-so-far written");
    }
    return kExitOk;
}

int run_load(const RunConfig& cfg, const CliOptions& opt, std::ostream& log) {
    const Solved s = solve_config(cfg);
    const Eigen::Index last = s.load.yL.rows() - 1;
    json doc = {{"name", cfg.name},
                {"system_class", system_class(cfg)},
                {"trajectory_load",
                 {{"consistency_error", s.load.consistency_error},
                  {"yL_initial", to_json(Eigen::VectorXd(s.load.yL.row(0).transpose()))},
                  {"yL_final", to_json(Eigen::VectorXd(s.load.yL.row(last).transpose()))},
                  {"p_initial", to_json(s.sol.p0)},
                  {"terminal_condition", "p(T) = 0"},
                  {"causal", false}}}};
    if (cfg.structured) {
        try {
            const StructuredLoad load = structured_adjoint(*cfg.structured, &s.sol.traj);
            doc["structured_load"] = structured_json(load);
            const StructureReport rep = verify_structure(*cfg.structured, s.sol.traj);
            json r = {{"max_discrepancy", rep.max_discrepancy}, {"structure_preserved", rep.structure_preserved}};
            if (rep.storage_nonpositive) r["storage_nonpositive"] = *rep.storage_nonpositive;
            doc["structure_report"] = r;
        } catch (const UnsupportedClass& e) {
            doc["structured_load"] = {{"supported", false}, {"reason", e.what()}};
        }
    } else {
        doc["structured_load"] = {{"supported", false}, {"reason", "generic system has no structured form"}};
    }
    write_json(output_path(opt, cfg.outputs.load_report), doc);
    log << cfg.name << ": load consistency error " << fmt(s.load.consistency_error, false) << '\n';
    return kExitOk;
}

int run_simulate(const RunConfig& cfg, const CliOptions& opt, std::ostream& log) {
    if (opt.input.empty()) throw ConfigError("--input", "simulate needs an input signal CSV");
    std::ifstream in(opt.input);
    if (!in) throw IoError("cannot open input file " + opt.input.string());
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("--input", "empty input file");
    std::vector<double> ts;
    std::vector<std::vector<double>> us;
    for (std::size_t row = 1; std::getline(in, line); ++row) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> vals;
        try {
            while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw ConfigError("--input:" + std::to_string(row + 1), "non-numeric cell");
        }
        if (vals.size() != cfg.system.io_dim() + 1) {
            throw ConfigError("--input:" + std::to_string(row + 1),
                              "expected t and " + std::to_string(cfg.system.io_dim()) + " input columns");
        }
        ts.push_back(vals.front());
        us.emplace_back(vals.begin() + 1, vals.end());
    }
    if (ts.size() < 11) throw ConfigError("--input", "need at least 11 uniformly spaced samples");
    const UniformGrid grid{ts.back(), ts.size() - 1};
    for (std::size_t k = 0; k < ts.size(); ++k) {
        if (std::abs(ts[k] - grid.t(k)) > 1e-9 * std::max(1.0, grid.T)) {
            throw ConfigError("--input:" + std::to_string(k + 2), "samples must be uniform on [0, T]");
        }
    }
    Eigen::MatrixXd u(static_cast<Eigen::Index>(us.size()), static_cast<Eigen::Index>(cfg.system.io_dim()));
    for (std::size_t k = 0; k < us.size(); ++k) {
        for (std::size_t j = 0; j < us[k].size(); ++j) u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = us[k][j];
    }
    cfg.source.check_covers(grid.T);
    const Simulation sim = simulate(cfg.system, cfg.x0, grid, u, &cfg.source);

    std::ostringstream os;
    os << 't';
    header_block(os, "x", sim.traj.x.cols());
    header_block(os, "u", sim.traj.u.cols());
    header_block(os, "y", sim.traj.y.cols());
    os << '\n';
    for (Eigen::Index k = 0; k < sim.traj.u.rows(); ++k) {
        os << fmt(grid.t(static_cast<std::size_t>(k)), opt.full_precision);
        row_block(os, sim.traj.x, k, opt.full_precision);
        row_block(os, sim.traj.u, k, opt.full_precision);
        row_block(os, sim.traj.y, k, opt.full_precision);
        os << '\n';
    }
    write_file(output_path(opt, cfg.outputs.simulation), os.str());
    write_json(output_path(opt, cfg.outputs.simulation_summary),
               {{"name", cfg.name}, {"T", grid.T}, {"N", grid.N}, {"power", sim.power}, {"extracted_energy", -sim.power}});
    log << cfg.name << ": simulated power " << fmt(sim.power, true) << '\n';
    return kExitOk;
}

int run_command(const std::string& command, const CliOptions& opt, std::ostream& out, std::ostream& err) {
    std::error_code ec;
    if (!fs::is_directory(opt.config, ec)) return run_one(command, opt, out, err, "");

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(opt.config, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    if (ec) {
        err << json{{"error", {{"category", "io"}, {"message", "cannot list " + opt.config.string()}}}}.dump() << '\n';
        return kExitIo;
    }
    std::sort(files.begin(), files.end());

    std::vector<int> codes(files.size(), kExitOk);
    std::vector<std::string> logs(files.size());
    std::vector<std::string> errors(files.size());
    std::size_t next = 0;
    std::mutex lock;
    auto worker = [&] {
        while (true) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> g(lock);
                if (next >= files.size()) return;
                i = next++;
            }
            CliOptions one = opt;
            one.config = files[i];
            one.out_dir = opt.out_dir / files[i].stem();
            std::ostringstream o;
            std::ostringstream e;
            codes[i] = run_one(command, one, o, e, files[i].filename().string());
            logs[i] = o.str();
            errors[i] = e.str();
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(opt.jobs, files.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int worst = kExitOk;
    for (std::size_t i = 0; i < files.size(); ++i) {
        out << logs[i];
        err << errors[i];
        worst = std::max(worst, codes[i]);
    }
    return worst;
}

}  // namespace optload::cli
