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
#include "optload/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "optload/errors.hpp"
#include "optload/hamiltonian.hpp"
#include "optload/linalg.hpp"
#include "optload/variational.hpp"

namespace optload {

double power_functional(const GenericSystem& sys, const SourceSignal& source, const Eigen::VectorXd& x0,
                        const UniformGrid& grid, const Eigen::MatrixXd& u) {
    return simulate(sys, x0, grid, u, &source).power;
}

Eigen::MatrixXd variational_derivative(const GenericSystem& sys, const SourceSignal& source,
                                       const Eigen::VectorXd& x0, const UniformGrid& grid,
                                       const Eigen::MatrixXd& u) {
    const Simulation fwd = simulate(sys, x0, grid, u, &source);
    const LtvSystem adj = adjoint_along(sys, fwd.traj);
    const LtvResponse back = simulate_ltv(
        adj, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.state_dim())), u, Direction::Backward);
    Eigen::MatrixXd grad = fwd.traj.y + back.output;
    for (std::size_t k = 0; k < grid.points(); ++k) {
        grad.row(static_cast<Eigen::Index>(k)) -= source(grid.t(k)).transpose();
    }
    return grad;
}

std::string to_string(OracleStatus s) {
    switch (s) {
        case OracleStatus::Converged: return "converged";
        case OracleStatus::BudgetExhausted: return "budget_exhausted";
        case OracleStatus::LineSearchStalled: return "line_search_stalled";
    }
    return "unknown";
}

OracleResult oracle_minimize(const GenericSystem& sys, const SourceSignal& source,
                             const Eigen::VectorXd& x0, const UniformGrid& grid,
                             const OracleOptions& options) {
    grid.validate();
    const auto rows = static_cast<Eigen::Index>(grid.points());
    const auto m = static_cast<Eigen::Index>(sys.io_dim());

    OracleResult res;
    res.u = Eigen::MatrixXd::Zero(rows, m);
    res.power = power_functional(sys, source, x0, grid, res.u);
    res.history.push_back(res.power);
    Eigen::MatrixXd g = variational_derivative(sys, source, x0, grid, res.u);
    res.gradient_norm = max_abs(g);

    while (true) {
        if (res.gradient_norm <= options.gradient_tolerance) {
            res.status = OracleStatus::Converged;
            break;
        }
        if (res.iterations >= options.max_iterations) {
            res.status = OracleStatus::BudgetExhausted;
            break;
        }
        const double slope = std::pow(l2_norm(grid, g), 2);
        double alpha = options.initial_step;
        bool accepted = false;
        Eigen::MatrixXd trial;
        double trial_power = 0.0;
        for (std::size_t b = 0; b < options.max_backtracks; ++b, alpha *= options.shrink) {
            trial = res.u - alpha * g;
            trial_power = power_functional(sys, source, x0, grid, trial);
            // Strict decrease: once the Armijo margin drops below one ulp of P,
            // equal values would otherwise be accepted forever.
            if (trial_power < res.power && trial_power <= res.power - options.armijo * alpha * slope) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            res.status = OracleStatus::LineSearchStalled;
            break;
        }
        res.u = std::move(trial);
        res.power = trial_power;
        res.history.push_back(res.power);
        g = variational_derivative(sys, source, x0, grid, res.u);
        res.gradient_norm = max_abs(g);
        ++res.iterations;
    }
    return res;
}

std::string to_string(PassivityCertificate c) {
    switch (c) {
        case PassivityCertificate::PositiveReal: return "positive_real";
        case PassivityCertificate::NotPositiveReal: return "not_positive_real";
        case PassivityCertificate::NotApplicable: return "not_applicable";
    }
    return "unknown";
}

PassivityReport linear_passivity_test(const LinearSystem& sigma_plus) {
    constexpr double kImagTol = 1e-8;
    PassivityReport rep;
    const Eigen::MatrixXd R = sigma_plus.D + sigma_plus.D.transpose();
    const auto m = R.rows();
    if (m == 0 || Eigen::FullPivLU<Eigen::MatrixXd>(R).rank() < m ||
        linalg::condition_number(R) >= linalg::kMaxCondition) {
        rep.certificate = PassivityCertificate::NotApplicable;
        rep.notes.push_back("D + D^T of Sigma+ is singular");
        return rep;
    }
    if (linalg::min_eigenvalue(R) <= 0.0) {
        rep.certificate = PassivityCertificate::NotPositiveReal;
        rep.notes.push_back("D + D^T of Sigma+ is not positive definite");
        return rep;
    }

    const LinearSystem mr = linalg::minimal_realization(sigma_plus);
    rep.minimal_order = static_cast<std::size_t>(mr.A.rows());
    const auto full = static_cast<std::size_t>(sigma_plus.A.rows());
    if (rep.minimal_order < full) {
        rep.notes.push_back(std::to_string(full - rep.minimal_order) +
                            " uncontrollable or unobservable modes removed; the certificate covers the "
                            "transfer behavior only");
    }
    if (rep.minimal_order == 0) {
        rep.certificate = PassivityCertificate::PositiveReal;
        rep.notes.push_back("static transfer matrix with positive definite symmetric part");
        return rep;
    }

    const Eigen::VectorXcd poles = Eigen::EigenSolver<Eigen::MatrixXd>(mr.A, false).eigenvalues();
    const double max_re = poles.real().maxCoeff();
    if (max_re > kImagTol) {
        rep.certificate = PassivityCertificate::NotPositiveReal;
        rep.notes.push_back("minimal realization has an unstable pole (Re = " + std::to_string(max_re) + ")");
        return rep;
    }
    if (max_re >= -kImagTol) {
        rep.certificate = PassivityCertificate::NotPositiveReal;
        rep.notes.push_back("inconclusive: minimal realization has a pole on the imaginary axis");
        return rep;
    }

    const Eigen::MatrixXd Rinv = R.inverse();
    const Eigen::Index n = mr.A.rows();
    const Eigen::MatrixXd Ac = mr.A - mr.B * Rinv * mr.C;
    Eigen::MatrixXd H(2 * n, 2 * n);
    H.topLeftCorner(n, n) = Ac;
    H.topRightCorner(n, n) = -mr.B * Rinv * mr.B.transpose();
    H.bottomLeftCorner(n, n) = mr.C.transpose() * Rinv * mr.C;
    H.bottomRightCorner(n, n) = -Ac.transpose();
    const Eigen::VectorXcd zeros = Eigen::EigenSolver<Eigen::MatrixXd>(H, false).eigenvalues();
    const double min_abs_re = zeros.real().cwiseAbs().minCoeff();
    if (min_abs_re <= kImagTol) {
        rep.certificate = PassivityCertificate::NotPositiveReal;
        rep.notes.push_back("Hamiltonian test matrix has an imaginary-axis eigenvalue");
    } else {
        rep.certificate = PassivityCertificate::PositiveReal;
    }
    return rep;
}

Eigen::MatrixXd random_perturbation(const UniformGrid& grid, std::size_t m, double magnitude,
                                    std::uint64_t seed, std::size_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<int> terms(1, 5);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_real_distribution<double> omega(0.0, 6.0 * std::numbers::pi / grid.T);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> level(0.2, 1.0);

    const auto rows = static_cast<Eigen::Index>(grid.points());
    Eigen::MatrixXd du = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(m));
    for (Eigen::Index c = 0; c < du.cols(); ++c) {
        const int count = terms(rng);
        for (int i = 0; i < count; ++i) {
            const double a = amp(rng);
            const double w = omega(rng);
            const double ph = phase(rng);
            for (Eigen::Index k = 0; k < rows; ++k) {
                du(k, c) += a * std::sin(w * grid.t(static_cast<std::size_t>(k)) + ph);
            }
        }
    }
    const double peak = max_abs(du);
    const double target = magnitude * level(rng);
    if (peak > 0.0) du *= target / peak;
    return du;
}

OptimalityReport perturbation_test(const GenericSystem& sys, const SourceSignal& source,
                                   const Eigen::VectorXd& x0, const UniformGrid& grid,
                                   const Eigen::MatrixXd& u_hat, const PerturbationOptions& options) {
    OptimalityReport rep;
    const double base = power_functional(sys, source, x0, grid, u_hat);
    rep.perturbation_margin = std::numeric_limits<double>::infinity();
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        double margin = 0.0;
        if (!(options.include_zero && trial == 0)) {
            const Eigen::MatrixXd du =
                random_perturbation(grid, sys.io_dim(), options.magnitude, options.seed, trial);
            margin = power_functional(sys, source, x0, grid, u_hat + du) - base;
        }
        rep.margins.push_back(margin);
        if (margin < rep.perturbation_margin) {
            rep.perturbation_margin = margin;
            rep.worst_trial = trial;
        }
    }
    rep.trials = options.trials;
    if (rep.trials == 0) rep.perturbation_margin = 0.0;
    return rep;
}

OptimalityReport certify(const ProblemSpec& spec, const BvpSolution& sol, const PerturbationOptions& options) {
    OptimalityReport rep =
        perturbation_test(spec.sys, spec.source, spec.x0, sol.traj.grid, sol.traj.u, options);
    rep.first_order_residual = residual_first_order(spec, sol);
    if (const auto& lin = spec.sys.linear()) {
        rep.passivity = linear_passivity_test(sigma_plus_realization(*lin));
        rep.empirical_only = rep.passivity.certificate != PassivityCertificate::PositiveReal;
    } else {
        rep.passivity.certificate = PassivityCertificate::NotApplicable;
        rep.passivity.notes.push_back("nonlinear system: minimality is supported empirically only");
        rep.empirical_only = true;
    }
    return rep;
}

}  // namespace optload
