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
#ifndef OPTLOAD_VARIATIONAL_HPP
#define OPTLOAD_VARIATIONAL_HPP

#include <vector>

#include <Eigen/Dense>

#include "optload/model.hpp"
#include "optload/trajectory.hpp"

namespace optload {

/**
 * @brief Linear time-varying system z' = A(t) z + B(t) w, out = C(t) z + D(t) w.
 *
 * Coefficients are sampled on the half-grid (nodes and interval midpoints), which
 * are exactly the RK4 stage times, and interpolated piecewise-linearly elsewhere.
 */
struct LtvSystem {
    struct Matrices {
        Eigen::MatrixXd A, B, C, D;
    };

    UniformGrid grid;
    std::vector<Matrices> samples;  // grid.half_points() entries

    std::size_t state_dim() const { return static_cast<std::size_t>(samples.front().A.rows()); }
    std::size_t input_dim() const { return static_cast<std::size_t>(samples.front().B.cols()); }
    std::size_t output_dim() const { return static_cast<std::size_t>(samples.front().C.rows()); }

    Matrices at(double t) const;

    /// Throws DimensionError on inconsistent sample shapes or counts.
    void validate() const;
};

/// (A, B, C, D) -> (-A^T, -C^T, B^T, D^T) at every sample.
LtvSystem formal_adjoint(const LtvSystem& sys);

/// Linearization of sys along (x(t), u(t)) of traj.
LtvSystem variational_along(const GenericSystem& sys, const Trajectory& traj);

/// Adjoint variational system p' = -f_x^T p - h_x^T u_a, y_a = f_u^T p + h_u^T u_a.
LtvSystem adjoint_along(const GenericSystem& sys, const Trajectory& traj);

/// (x, u) at every half-grid point of traj: x at midpoints by cubic Hermite
/// interpolation with slopes f(x_k, u_k), u piecewise linear.
struct HalfGridPoints {
    std::vector<Eigen::VectorXd> x;
    std::vector<Eigen::VectorXd> u;
};
HalfGridPoints half_grid_points(const GenericSystem& sys, const Trajectory& traj);

struct LtvResponse {
    Eigen::MatrixXd state;   // (N+1) x n
    Eigen::MatrixXd output;  // (N+1) x outputs
    double weighted_output_integral = 0.0;  // int_0^T weight(t)^T out(t) dt, if requested
};

/**
 * @brief Fixed-step RK4 simulation of an LTV system on its grid.
 *
 * Forward runs start from z(0) = boundary, backward runs from z(T) = boundary.
 * When `output_weight` is given, int weight^T out dt is integrated as an
 * additional RK4 state so it carries the same order as the state.
 */
LtvResponse simulate_ltv(const LtvSystem& sys, const Eigen::VectorXd& boundary,
                         const Eigen::MatrixXd& input, Direction dir,
                         const Eigen::MatrixXd* output_weight = nullptr);

struct DualityTerms {
    double ya_du = 0.0;     // int y_a^T du
    double ua_dy = 0.0;     // int u_a^T dy
    double boundary = 0.0;  // p^T dx |_0^T
    double residual = 0.0;  // |ya_du - ua_dy - boundary|
};

/// Checks d/dt p^T dx = y_a^T du - u_a^T dy in integrated form with dx(0) = 0
/// and p(T) = 0. `du` and `ua` are grid signals on traj's grid.
DualityTerms duality_terms(const GenericSystem& sys, const Trajectory& traj,
                           const Eigen::MatrixXd& du, const Eigen::MatrixXd& ua);

double duality_residual(const GenericSystem& sys, const Trajectory& traj,
                        const Eigen::MatrixXd& du, const Eigen::MatrixXd& ua);

}  // namespace optload

#endif  // OPTLOAD_VARIATIONAL_HPP
