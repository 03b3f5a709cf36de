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
#ifndef OPTLOAD_POWER_HPP
#define OPTLOAD_POWER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "optload/model.hpp"
#include "optload/solver.hpp"
#include "optload/source_signal.hpp"
#include "optload/trajectory.hpp"

namespace optload {

/// P(u) = int_0^T (y - y_S)^T u dt for Sigma started at x0 under the grid input u.
double power_functional(const GenericSystem& sys, const SourceSignal& source, const Eigen::VectorXd& x0,
                        const UniformGrid& grid, const Eigen::MatrixXd& u);

/// t -> y+(t) - y_S(t) on the grid, with y+ = y + y_a from the adjoint run
/// backwards from p(T) = 0 under u_a = u.
Eigen::MatrixXd variational_derivative(const GenericSystem& sys, const SourceSignal& source,
                                       const Eigen::VectorXd& x0, const UniformGrid& grid,
                                       const Eigen::MatrixXd& u);

struct OracleOptions {
    std::size_t max_iterations = 2000;
    double initial_step = 1.0;
    double shrink = 0.5;
    double armijo = 1e-4;
    double gradient_tolerance = 1e-8;  // on |grad|_inf
    std::size_t max_backtracks = 60;
};

enum class OracleStatus {
    Converged,
    BudgetExhausted,
    LineSearchStalled,  // no Armijo decrease is representable at the current gradient
};

std::string to_string(OracleStatus s);

struct OracleResult {
    Eigen::MatrixXd u;  // best input found, (N+1) x m
    double power = 0.0;
    double gradient_norm = 0.0;  // |grad|_inf at u
    std::size_t iterations = 0;
    OracleStatus status = OracleStatus::BudgetExhausted;
    std::vector<double> history;  // P after every accepted step, starting at u = 0
};

/**
 * @brief Brute-force minimizer of the discretized power functional.
 *
 * Steepest descent in L2 on all m (N+1) grid values from u = 0 with Armijo
 * backtracking. Independent of the shooting solver apart from the shared
 * simulation primitives.
 */
OracleResult oracle_minimize(const GenericSystem& sys, const SourceSignal& source,
                             const Eigen::VectorXd& x0, const UniformGrid& grid,
                             const OracleOptions& options = {});

enum class PassivityCertificate { PositiveReal, NotPositiveReal, NotApplicable };

std::string to_string(PassivityCertificate c);

struct PassivityReport {
    PassivityCertificate certificate = PassivityCertificate::NotApplicable;
    std::size_t minimal_order = 0;
    std::vector<std::string> notes;
};

/**
 * @brief Eigenvalue positive-real test of a linear realization of Sigma+.
 *
 * Requires D + D^T positive definite. The realization is reduced to its
 * minimal part first; the result is positive_real iff that part is
 * asymptotically stable and the Hamiltonian matrix of Phi(s) = G(s) + G(-s)^T
 * has no eigenvalue with |Re| <= 1e-8.
 */
PassivityReport linear_passivity_test(const LinearSystem& sigma_plus);

struct PerturbationOptions {
    std::size_t trials = 100;
    double magnitude = 0.1;  // L_inf bound of each perturbation
    std::uint64_t seed = 0;
    bool include_zero = false;  // trial 0 uses du = 0
};

struct OptimalityReport {
    double first_order_residual = 0.0;
    double perturbation_margin = 0.0;  // min over trials of P(u + du) - P(u)
    std::size_t worst_trial = 0;
    std::size_t trials = 0;
    std::vector<double> margins;
    PassivityReport passivity;
    bool empirical_only = true;  // no passivity certificate backs the minimality claim
};

/// Smooth random perturbation of trial `trial`: a sum of at most five
/// sinusoids per channel scaled to L_inf <= magnitude on the grid.
Eigen::MatrixXd random_perturbation(const UniformGrid& grid, std::size_t m, double magnitude,
                                    std::uint64_t seed, std::size_t trial);

/// Fills the perturbation fields of the report; the other fields stay default.
OptimalityReport perturbation_test(const GenericSystem& sys, const SourceSignal& source,
                                   const Eigen::VectorXd& x0, const UniformGrid& grid,
                                   const Eigen::MatrixXd& u_hat, const PerturbationOptions& options = {});

/// First-order residual, perturbation test and, for linear systems, the passivity certificate.
OptimalityReport certify(const ProblemSpec& spec, const BvpSolution& sol,
                         const PerturbationOptions& options = {});

}  // namespace optload

#endif  // OPTLOAD_POWER_HPP
