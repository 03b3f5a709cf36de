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
#ifndef OPTLOAD_TRAJECTORY_HPP
#define OPTLOAD_TRAJECTORY_HPP

#include <cstddef>

#include <Eigen/Dense>

namespace optload {

/// Uniform grid t_k = k T / N, k = 0..N, plus the half-grid of RK4 stage times.
struct UniformGrid {
    double T = 1.0;
    std::size_t N = 1000;

    double step() const { return T / static_cast<double>(N); }
    double t(std::size_t k) const {
        return k == N ? T : T * static_cast<double>(k) / static_cast<double>(N);
    }
    /// Time of half-grid index j in [0, 2N].
    double t_half(std::size_t j) const {
        return j == 2 * N ? T : T * static_cast<double>(j) / static_cast<double>(2 * N);
    }
    std::size_t points() const { return N + 1; }
    std::size_t half_points() const { return 2 * N + 1; }

    /// Throws InvalidArgument unless T > 0 and N >= 1.
    void validate() const;

    friend bool operator==(const UniformGrid&, const UniformGrid&) = default;
};

/// Sampled trajectory; every matrix has one row per grid point. Columns that a
/// computation does not produce are left empty (zero columns).
struct Trajectory {
    UniformGrid grid;
    Eigen::MatrixXd x;
    Eigen::MatrixXd p;
    Eigen::MatrixXd u;
    Eigen::MatrixXd y;
    Eigen::MatrixXd yplus;
};

enum class Direction { Forward, Backward };

/// Where an RK4 stage is evaluated: its time and its index on the half-grid.
struct Stage {
    double t;
    std::size_t half;
};

/**
 * @brief One classical RK4 step over interval k of the grid.
 *
 * Forward steps go from node k to k+1, backward steps from node k+1 to k. The
 * right-hand side is called as rhs(Stage, z) so grid-sampled coefficients can
 * be looked up by half-grid index instead of interpolated.
 */
template <class Rhs>
Eigen::VectorXd rk4_step(const Rhs& rhs, const UniformGrid& grid, std::size_t k,
                         const Eigen::VectorXd& z, Direction dir) {
    const bool fwd = dir == Direction::Forward;
    const double h = fwd ? grid.step() : -grid.step();
    const Stage s0 = fwd ? Stage{grid.t(k), 2 * k} : Stage{grid.t(k + 1), 2 * k + 2};
    const Stage s1{grid.t_half(2 * k + 1), 2 * k + 1};
    const Stage s2 = fwd ? Stage{grid.t(k + 1), 2 * k + 2} : Stage{grid.t(k), 2 * k};

    const Eigen::VectorXd k1 = rhs(s0, z);
    const Eigen::VectorXd k2 = rhs(s1, Eigen::VectorXd(z + 0.5 * h * k1));
    const Eigen::VectorXd k3 = rhs(s1, Eigen::VectorXd(z + 0.5 * h * k2));
    const Eigen::VectorXd k4 = rhs(s2, Eigen::VectorXd(z + h * k3));
    return z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Row of a grid signal at half-grid index j (piecewise-linear midpoint for odd j).
Eigen::VectorXd half_row(const Eigen::MatrixXd& signal, std::size_t j);

/// Cubic Hermite value at the midpoint of an interval of length h.
Eigen::VectorXd hermite_midpoint(const Eigen::VectorXd& x0, const Eigen::VectorXd& x1,
                                 const Eigen::VectorXd& dx0, const Eigen::VectorXd& dx1,
                                 double h);

/// Piecewise-linear interpolation of a grid signal at time t in [0, T].
Eigen::VectorXd interpolate(const Eigen::MatrixXd& signal, const UniformGrid& grid, double t);

/// Exact L2 inner product of the piecewise-linear interpolants of two grid signals.
double l2_inner(const UniformGrid& grid, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
double l2_norm(const UniformGrid& grid, const Eigen::MatrixXd& a);

/// Max absolute entry (0 for empty).
double max_abs(const Eigen::MatrixXd& a);

}  // namespace optload

#endif  // OPTLOAD_TRAJECTORY_HPP
