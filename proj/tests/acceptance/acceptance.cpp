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
// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "optload/hamiltonian.hpp"
#include "optload/loads.hpp"
#include "optload/power.hpp"
#include "optload/solver.hpp"
#include "optload/variational.hpp"
#include "optload_cli/commands.hpp"
#include "optload_cli/config.hpp"
#include "support.hpp"

namespace {

using namespace optload;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const fs::path kConfigDir = OPTLOAD_CONFIG_DIR;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
        pass = pass && ok;
    }
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<fs::path> bundled_configs() {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(kConfigDir)) {
        if (e.path().extension() == ".json") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

ProblemSpec rc_problem(std::size_t N = 1000) {
    return {testing::rc_system(), testing::unit_source(), Eigen::VectorXd::Zero(1), 1.0, N, {}};
}

ProblemSpec capacitor_problem(std::size_t N = 1000) {
    return {testing::nonlinear_capacitor(), testing::unit_source(), Eigen::VectorXd::Zero(1), 1.0, N, {}};
}

Outcome ac1() {
    Outcome o;
    const auto start = Clock::now();
    const BvpSolution sol = solve_optimal_input(rc_problem());
    const double elapsed = seconds_since(start);
    const double err = max_abs((sol.traj.u.array() - 1.0 / 3.0).matrix());
    const double de = std::abs(sol.extracted_energy - 1.0 / 6.0);
    o.require(err <= 1e-6, "|u - 1/3|_inf = " + sci(err));
    o.require(de <= 1e-6, "|E - 1/6| = " + sci(de));
    o.require(elapsed < 1.0, "runtime " + sci(elapsed) + " s");
    return o;
}

Outcome ac2() {
    Outcome o;
    const GenericSystem resistor = GenericSystem::from_strings(0, 1, {}, {"R*u0"}, {{"R", 1.0}});
    const ProblemSpec spec{resistor, testing::unit_source(), Eigen::VectorXd(0), 1.0, 1000, {}};
    const auto start = Clock::now();
    const BvpSolution sol = solve_optimal_input(spec);
    const double elapsed = seconds_since(start);
    const double err = max_abs((sol.traj.u.array() - 0.5).matrix());
    const double de = std::abs(sol.extracted_energy - 0.25);
    o.require(err <= 1e-9, "|u - 0.5|_inf = " + sci(err));
    o.require(de <= 1e-9, "|E - 0.25| = " + sci(de));
    o.require(elapsed < 0.1, "runtime " + sci(elapsed) + " s");
    return o;
}

Outcome ac3() {
    Outcome o;
    for (const auto& [name, spec] : {std::pair{"rc", rc_problem()}, std::pair{"capacitor", capacitor_problem()}}) {
        const BvpSolution sol = solve_optimal_input(spec);
        const auto start = Clock::now();
        const OracleResult orc = oracle_minimize(spec.sys, spec.source, spec.x0, spec.grid());
        const double elapsed = seconds_since(start);
        const double dist = l2_norm(spec.grid(), sol.traj.u - orc.u);
        const double dp = std::abs(-sol.extracted_energy - orc.power);
        o.require(dist <= 1e-3 && dp <= 1e-4 && elapsed < 30.0 && orc.status != OracleStatus::BudgetExhausted,
                  std::string(name) + ": L2 " + sci(dist) + ", dP " + sci(dp) + ", " + sci(elapsed) + " s, " +
                      to_string(orc.status));
    }
    return o;
}

double duality_at(const GenericSystem& sys, std::uint64_t seed, std::size_t N) {
    std::mt19937_64 rng(seed);
    const auto m = static_cast<Eigen::Index>(sys.io_dim());
    const UniformGrid grid{1.0, N};
    const Eigen::MatrixXd u = testing::smooth_signal(rng, grid, m, 0.5);
    const Trajectory tr = simulate(sys, Eigen::VectorXd::Constant(sys.state_dim(), 0.1), grid, u).traj;
    return duality_residual(sys, tr, testing::smooth_signal(rng, grid, m), testing::smooth_signal(rng, grid, m));
}

// Residual and both pairings on a refinement of a fixed piecewise-linear input.
DualityTerms refined_duality(const GenericSystem& sys, std::size_t N) {
    const UniformGrid grid{2.0, N};
    const auto m = static_cast<Eigen::Index>(sys.io_dim());
    const Trajectory tr = simulate(sys, Eigen::VectorXd::Constant(sys.state_dim(), 0.3), grid,
                                   testing::coarse_linear_signal(grid, m, 0.5, 1.0))
                              .traj;
    return duality_terms(sys, tr, testing::coarse_linear_signal(grid, m, 1.0, 2.0),
                         testing::coarse_linear_signal(grid, m, 1.0, 3.0));
}

Outcome ac4() {
    Outcome o;
    std::mt19937_64 rng(404);
    double worst_linear = 0.0;
    double worst_nonlinear = 0.0;
    for (std::uint64_t i = 0; i < 10; ++i) {
        const std::size_t n = 1 + i % 3;
        const std::size_t m = 1 + (i / 3) % 3;
        const GenericSystem lin = linear_to_generic(
            testing::random_linear(rng, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)));
        worst_linear = std::max(worst_linear, duality_at(lin, 1000 + i, 2000));
        const GenericSystem nl = testing::random_nonlinear(rng, n, m);
        worst_nonlinear = std::max(worst_nonlinear, duality_at(nl, 2000 + i, 2000));
    }
    o.require(worst_linear <= 1e-6, "linear max " + sci(worst_linear));
    o.require(worst_nonlinear <= 1e-6, "nonlinear max " + sci(worst_nonlinear));

    // The residual is at roundoff on every grid, so the integrator order is read
    // off the convergence of the two pairings it compares.
    std::mt19937_64 srng(77);
    const GenericSystem sys = testing::random_nonlinear(srng, 2, 2);
    std::vector<DualityTerms> runs;
    double worst_refined = 0.0;
    for (std::size_t N : {40, 80, 160, 320}) {
        runs.push_back(refined_duality(sys, N));
        worst_refined = std::max(worst_refined, runs.back().residual);
    }
    auto slope = [&](auto member, std::size_t i) {
        return std::log2(std::abs(runs[i + 1].*member - runs[i].*member) /
                         std::abs(runs[i + 2].*member - runs[i + 1].*member));
    };
    bool slopes_ok = true;
    std::string slopes;
    for (auto member : {&DualityTerms::ya_du, &DualityTerms::ua_dy}) {
        for (std::size_t i = 0; i < 2; ++i) {
            const double s = slope(member, i);
            slopes_ok = slopes_ok && std::abs(s - 4.0) <= 0.3;
            slopes += (slopes.empty() ? "" : ", ") + sci(s);
        }
    }
    o.require(worst_refined <= 1e-12, "refinement residual max " + sci(worst_refined));
    o.require(slopes_ok, "pairing slopes " + slopes);
    return o;
}

// Sigma+ of each system, derived by hand from H+ = p f + u h with states (x, p).
struct RoundTripCase {
    std::string name;
    GenericSystem base;
    GenericSystem sigma_plus;
    double p0;
};

Outcome ac5() {
    Outcome o;
    const std::vector<RoundTripCase> cases = {
        {"rc", testing::rc_system(), GenericSystem::from_strings(2, 1, {"u0", "-u0"}, {"x0 + x1 + 2*u0"}), 0.2},
        {"capacitor", testing::nonlinear_capacitor(),
         GenericSystem::from_strings(2, 1, {"u0", "-3*x0^2*u0"}, {"x1 + x0^3 + 2*u0"}), 0.4},
    };
    const std::size_t N = 2000;
    const UniformGrid coarse{1.0, N};
    const UniformGrid fine{1.0, 2 * N};
    auto input = [](double t) { return 0.5 + 0.3 * std::sin(2.0 * M_PI * t); };
    for (const auto& c : cases) {
        Eigen::MatrixXd u(static_cast<Eigen::Index>(fine.points()), 1);
        for (std::size_t k = 0; k < fine.points(); ++k) u(static_cast<Eigen::Index>(k), 0) = input(fine.t(k));
        const Trajectory plus = simulate(c.sigma_plus, Eigen::Vector2d(0.0, c.p0), fine, u).traj;
        std::vector<SourceSignal::Knot> knots;
        for (std::size_t k = 0; k < fine.points(); ++k) {
            knots.push_back({fine.t(k), plus.y.row(static_cast<Eigen::Index>(k)).transpose()});
        }
        const ProblemSpec spec{c.base, SourceSignal::piecewise_linear(std::move(knots)), Eigen::VectorXd::Zero(1),
                               1.0, N, {}};
        const SigmaTimesRun run = integrate_sigma_times(spec, Eigen::VectorXd::Constant(1, c.p0));
        double err = 0.0;
        for (std::size_t k = 0; k < coarse.points(); ++k) {
            err = std::max(err, std::abs(run.traj.u(static_cast<Eigen::Index>(k), 0) - input(coarse.t(k))));
        }
        o.require(err <= 1e-6, c.name + " |u - u_in|_inf = " + sci(err));
    }
    return o;
}

Outcome ac6() {
    Outcome o;
    double worst = 0.0;
    std::string where;
    auto consider = [&](const std::string& name, const ProblemSpec& spec) {
        const BvpSolution sol = solve_optimal_input(spec);
        const double r = residual_first_order(spec, sol);
        if (r >= worst) {
            worst = r;
            where = name;
        }
    };
    consider("rc", rc_problem());
    consider("capacitor", capacitor_problem());
    for (const auto& path : bundled_configs()) consider(path.stem().string(), cli::load_config(path).problem());
    o.require(worst <= 1e-6, "max |y+ - y_S|_inf = " + sci(worst) + " (" + where + ")");
    return o;
}

Outcome ac7() {
    Outcome o;
    const ProblemSpec spec = rc_problem();
    const BvpSolution sol = solve_optimal_input(spec);
    const OptimalityReport rep =
        perturbation_test(spec.sys, spec.source, spec.x0, spec.grid(), sol.traj.u, {100, 0.1, 7, false});
    o.require(rep.trials == 100 && rep.perturbation_margin >= -1e-8,
              std::to_string(rep.trials) + " trials, min margin " + sci(rep.perturbation_margin));
    return o;
}

Outcome ac8() {
    Outcome o;
    std::mt19937_64 rng(808);
    const UniformGrid grid{1.0, 1000};
    bool exact = true;
    double worst_ph = 0.0;
    double worst_grad = 0.0;
    auto driven = [&](const StructuredSystem& s, Eigen::Index m) {
        const GenericSystem sys = to_generic(s);
        const Eigen::MatrixXd u = testing::smooth_signal(rng, grid, m);
        return simulate(sys, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.state_dim())), grid, u).traj;
    };
    for (int i = 0; i < 20; ++i) {
        const Eigen::Index n = 1 + i % 6;
        const Eigen::Index m = 1 + i % 3;
        const PortHamiltonianLinear ph = testing::random_ph_linear(rng, n, m);
        const PortHamiltonianLinear pa = structured_adjoint(ph);
        exact = exact && pa.J == -ph.J && pa.R == ph.R && pa.Q == -ph.Q && pa.B == -ph.B &&
                pa.D == ph.D.transpose();
        worst_ph = std::max(worst_ph, verify_structure(ph, driven(ph, m)).max_discrepancy);

        const GradientLinear gl = testing::random_gradient_linear(rng, n, m);
        const GradientLinear ga = structured_adjoint(gl);
        exact = exact && ga.G == -gl.G && ga.P == gl.P && ga.C == gl.C && ga.D == gl.D;
        worst_grad = std::max(worst_grad, verify_structure(gl, driven(gl, m)).max_discrepancy);
    }
    o.require(exact, exact ? "structured matrices exact" : "structured matrices differ");
    o.require(worst_ph <= 1e-8, "pH-linear max " + sci(worst_ph));
    o.require(worst_grad <= 1e-8, "gradient-linear max " + sci(worst_grad));

    const cli::RunConfig quartic = cli::load_config(kConfigDir / "port_hamiltonian_quartic.json");
    const BvpSolution sol = solve_optimal_input(quartic.problem());
    const double d = verify_structure(*quartic.structured, sol.traj).max_discrepancy;
    o.require(d <= 1e-6, "quartic pH " + sci(d));
    return o;
}

Outcome ac9() {
    Outcome o;
    const double eps = 1e-4;
    for (const auto& path : bundled_configs()) {
        const cli::RunConfig cfg = cli::load_config(path);
        const UniformGrid grid{cfg.T, 2000};
        const auto m = static_cast<Eigen::Index>(cfg.system.io_dim());
        std::mt19937_64 rng(cfg.seed + 9);
        const Eigen::MatrixXd u = testing::smooth_signal(rng, grid, m, 0.3);
        const Eigen::MatrixXd g = variational_derivative(cfg.system, cfg.source, cfg.x0, grid, u);
        double worst = 0.0;
        for (int dir = 0; dir < 20; ++dir) {
            const Eigen::MatrixXd du = testing::smooth_signal(rng, grid, m);
            const double fd = (power_functional(cfg.system, cfg.source, cfg.x0, grid, u + eps * du) -
                               power_functional(cfg.system, cfg.source, cfg.x0, grid, u - eps * du)) /
                              (2 * eps);
            const double adj = l2_inner(grid, g, du);
            worst = std::max(worst, std::abs(fd - adj) / std::max(std::abs(fd), 1e-3));
        }
        o.require(worst <= 1e-5, path.stem().string() + " " + sci(worst));
    }
    return o;
}

LinearSystem rc_linear(double R) {
    return {Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1),
            Eigen::MatrixXd::Constant(1, 1, R)};
}

Outcome ac10() {
    Outcome o;
    const struct {
        double R;
        PassivityCertificate expected;
    } cases[] = {{1.0, PassivityCertificate::PositiveReal},
                 {-1.0, PassivityCertificate::NotPositiveReal},
                 {0.0, PassivityCertificate::NotApplicable}};
    for (const auto& c : cases) {
        const PassivityCertificate got = linear_passivity_test(sigma_plus_realization(rc_linear(c.R))).certificate;
        o.require(got == c.expected, "R=" + sci(c.R) + " -> " + to_string(got));
    }
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome ac11() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / ("optload_acceptance_" + std::to_string(std::random_device{}()));
    std::size_t compared = 0;
    bool identical = true;
    bool ran = true;
    for (const auto& path : bundled_configs()) {
        for (const std::string cmd : {"solve", "verify"}) {
            std::vector<fs::path> dirs;
            for (int run = 0; run < 2; ++run) {
                cli::CliOptions opt;
                opt.config = path;
                opt.out_dir = root / std::to_string(run) / path.stem() / cmd;
                fs::create_directories(opt.out_dir);
                std::ostringstream out;
                std::ostringstream err;
                ran = ran && cli::run_command(cmd, opt, out, err) <= cli::kExitChecksFailed;
                dirs.push_back(opt.out_dir);
            }
            for (const auto& e : fs::directory_iterator(dirs[0])) {
                const fs::path other = dirs[1] / e.path().filename();
                identical = identical && fs::exists(other) && slurp(e.path()) == slurp(other);
                ++compared;
            }
        }
    }
    fs::remove_all(root);
    o.require(ran, ran ? "all runs completed" : "a run failed");
    o.require(identical && compared > 0, std::to_string(compared) + " files compared, " +
                                             (identical ? "bit-identical" : "outputs differ"));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"AC1 RC closed form", ac1},
        {"AC2 static resistor", ac2},
        {"AC3 oracle equivalence", ac3},
        {"AC4 duality identity", ac4},
        {"AC5 inverse-system round trip", ac5},
        {"AC6 first-order optimality", ac6},
        {"AC7 perturbation minimality", ac7},
        {"AC8 structure preservation", ac8},
        {"AC9 gradient checks", ac9},
        {"AC10 passivity certificate", ac10},
        {"AC11 determinism", ac11},
    };
    int failed = 0;
    for (const auto& [label, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", label.c_str(), o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
