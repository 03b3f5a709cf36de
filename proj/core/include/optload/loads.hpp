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
#ifndef OPTLOAD_LOADS_HPP
#define OPTLOAD_LOADS_HPP

#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "optload/model.hpp"
#include "optload/solver.hpp"
#include "optload/trajectory.hpp"
#include "optload/variational.hpp"

namespace optload {

/// The adjoint variational system along a solution, with u_a = u and p(T) = 0.
struct TrajectoryLoad {
    LtvSystem adjoint;
    Eigen::MatrixXd p;   // (N+1) x n
    Eigen::MatrixXd yL;  // (N+1) x m, y_L = fu^T p + hu^T u
    double consistency_error = 0.0;  // max_k |y_S - y - y_L|_inf
};

inline constexpr double kLoadConsistencyTol = 1e-5;

/// Throws ConsistencyViolation when y_S = y + y_L fails by more than 1e-5.
TrajectoryLoad load_from_solution(const ProblemSpec& spec, const BvpSolution& sol);

/// Structured adjoint of a nonlinear port-Hamiltonian system in z = Hess(H)^{-1} p,
/// sampled on the half-grid of a trajectory:
///   z' = (J' - R) Q(t) z + K(t) z + B' u_a,  y_a = B'^T Q(t) z + D' u_a
/// with J' = -J, B' = -B, D' = D^T, Q = -Hess H(x(t)) and K = -Hess^{-1} d/dt Hess.
struct PortHamiltonianAlongTrajectory {
    Eigen::MatrixXd J, R, B, D;
    UniformGrid grid;
    std::vector<Eigen::MatrixXd> Q;
    std::vector<Eigen::MatrixXd> correction;
};

/// Structured adjoint of a gradient system in z = G^{-1} p along a trajectory:
///   G' z' = -Vxx z - Vxu u_a,  y_a = -Vux z - Vuu u_a  with G' = -G.
struct GradientAlongTrajectory {
    Eigen::MatrixXd G;
    UniformGrid grid;
    std::vector<Eigen::MatrixXd> Vxx, Vxu, Vux, Vuu;
};

using StructuredLoad = std::variant<PortHamiltonianLinear, GradientLinear,
                                    PortHamiltonianAlongTrajectory, GradientAlongTrajectory>;

/// (J, R, Q, B, D) -> (-J, R, -Q, -B, D^T).
PortHamiltonianLinear structured_adjoint(const PortHamiltonianLinear& s);

/// (G, P, C, D) -> (-G, P, C, D).
GradientLinear structured_adjoint(const GradientLinear& s);

/**
 * @brief Structured adjoint of any supported class.
 *
 * Nonlinear classes need the evaluation trajectory and are sampled on its
 * half-grid. Plain linear and static systems throw UnsupportedClass.
 */
StructuredLoad structured_adjoint(const StructuredSystem& s, const Trajectory* traj = nullptr);

/// The z-coordinate system of a structured load as an LTV system on `grid`.
LtvSystem to_ltv(const StructuredLoad& load, const UniformGrid& grid);

struct StructureReport {
    double max_discrepancy = 0.0;  // max |y_a(generic) - y_a(structured)|
    bool structure_preserved = false;  // skew J', unchanged PSD R, symmetric Q' / G'
    std::optional<bool> storage_nonpositive;  // port-Hamiltonian classes only
};

/**
 * @brief Compares the generic adjoint along traj with the structured load.
 *
 * Both run backwards from zero terminal data (p(T) = 0, so z(T) = 0) under
 * u_a = traj.u. Throws SingularCoordinateChange when Q, G or Hess H is
 * singular along the trajectory.
 */
StructureReport verify_structure(const StructuredSystem& s, const Trajectory& traj);

}  // namespace optload

#endif  // OPTLOAD_LOADS_HPP
