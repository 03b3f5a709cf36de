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
#ifndef OPTLOAD_SOLVER_HPP
#define OPTLOAD_SOLVER_HPP

#include <cstddef>

#include <Eigen/Dense>

#include "optload/hamiltonian.hpp"
#include "optload/model.hpp"
#include "optload/source_signal.hpp"
#include "optload/trajectory.hpp"

namespace optload {

struct SolverOptions {
    double shooting_tolerance = 1e-10;  // on |p(T)|_inf
    std::size_t max_shooting_iterations = 30;
    double fd_step = 1e-6;              // forward-difference step of the shooting Jacobian
    std::size_t max_shooting_halvings = 30;
    NewtonOptions newton;
};

/// Extremal input problem: system, source y_S, x(0) = x0, horizon T, N RK4 steps.
struct ProblemSpec {
    GenericSystem sys;
    SourceSignal source;
    Eigen::VectorXd x0;
    double T = 1.0;
    std::size_t N = 1000;
    SolverOptions options;

    UniformGrid grid() const { return {T, N}; }

    /// T > 0, N >= 10, dim x0 = n, dim y_S = m and y_S defined on [0, T].
    void validate() const;
};

struct Simulation {
    Trajectory traj;     // x, u, y columns
    double power = 0.0;  // int (y - y_S)^T u dt when a source is given, else int y^T u dt
};

/// Forward RK4 simulation of x' = f(x, u) for a piecewise-linear input sampled
/// on the grid. The power integral is carried as an extra RK4 state.
Simulation simulate(const GenericSystem& sys, const Eigen::VectorXd& x0, const UniformGrid& grid,
                    const Eigen::MatrixXd& u, const SourceSignal* source = nullptr);

struct SigmaTimesRun {
    Trajectory traj;     // x, p, u, y, yplus columns
    double power = 0.0;  // int (y - y_S)^T u dt along the run
    std::size_t newton_iterations = 0;
};

/**
 * @brief RK4 integration of the inverse Hamiltonian system driven by y+ = y_S
 * from (x0, p0).
 *
 * At every stage u is recovered from y_S(t_stage) = dH+/du(x, p, u) by Newton,
 * warm-started from the previous stage.
 */
SigmaTimesRun integrate_sigma_times(const HamiltonianSystem& hs, const ProblemSpec& spec,
                                    const Eigen::VectorXd& p0);
SigmaTimesRun integrate_sigma_times(const ProblemSpec& spec, const Eigen::VectorXd& p0);

struct BvpSolution {
    Trajectory traj;
    Eigen::VectorXd p0;
    double shooting_residual = 0.0;  // |p(T)|_inf
    std::size_t shooting_iterations = 0;
    std::size_t newton_iterations = 0;  // inner Newton iterations of the final run
    double extracted_energy = 0.0;      // -P(u_hat)
};

/**
 * @brief Extremizing input for x(0) = x0, p(T) = 0 by single shooting on p(0).
 *
 * Newton on p0 -> p(T) with a forward-difference Jacobian and step halving,
 * starting from p0 = 0. Linear systems use unit differences, exact for the
 * affine shooting map. Systems without state need no shooting.
 * Throws ShootingDivergence when the residual stops decreasing or the
 * iteration budget is exhausted.
 */
BvpSolution solve_optimal_input(const ProblemSpec& spec);

/// max_k |y+(t_k) - y_S(t_k)|_inf recomputed from the solution's (x, p, u) columns.
double residual_first_order(const ProblemSpec& spec, const BvpSolution& sol);

}  // namespace optload

#endif  // OPTLOAD_SOLVER_HPP
