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
#include "optload/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optload/errors.hpp"

namespace optload {

void UniformGrid::validate() const {
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("horizon T must be positive");
    if (N < 1) throw InvalidArgument("grid needs N >= 1 steps");
}

Eigen::VectorXd half_row(const Eigen::MatrixXd& signal, std::size_t j) {
    const auto k = static_cast<Eigen::Index>(j / 2);
    if (j % 2 == 0) return signal.row(k).transpose();
    return 0.5 * (signal.row(k) + signal.row(k + 1)).transpose();
}

Eigen::VectorXd hermite_midpoint(const Eigen::VectorXd& x0, const Eigen::VectorXd& x1,
                                 const Eigen::VectorXd& dx0, const Eigen::VectorXd& dx1,
                                 double h) {
    return 0.5 * (x0 + x1) + (h / 8.0) * (dx0 - dx1);
}

Eigen::VectorXd interpolate(const Eigen::MatrixXd& signal, const UniformGrid& grid, double t) {
    if (t < -1e-12 * grid.T || t > grid.T * (1.0 + 1e-12)) {
        throw InvalidArgument("interpolation time " + std::to_string(t) + " outside [0, T]");
    }
    const double s = std::clamp(t / grid.step(), 0.0, static_cast<double>(grid.N));
    auto k = static_cast<std::size_t>(std::floor(s));
    if (k >= grid.N) return signal.row(static_cast<Eigen::Index>(grid.N)).transpose();
    const double theta = s - static_cast<double>(k);
    const auto ki = static_cast<Eigen::Index>(k);
    return ((1.0 - theta) * signal.row(ki) + theta * signal.row(ki + 1)).transpose();
}

double l2_inner(const UniformGrid& grid, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() ||
        a.rows() != static_cast<Eigen::Index>(grid.points())) {
        throw DimensionError("l2_inner: signal shapes differ from the grid");
    }
    // Exact on each interval for the product of two linear interpolants.
    double acc = 0.0;
    for (Eigen::Index k = 0; k + 1 < a.rows(); ++k) {
        acc += 2.0 * a.row(k).dot(b.row(k)) + a.row(k).dot(b.row(k + 1)) + a.row(k + 1).dot(b.row(k)) +
               2.0 * a.row(k + 1).dot(b.row(k + 1));
    }
    return acc * grid.step() / 6.0;
}

double l2_norm(const UniformGrid& grid, const Eigen::MatrixXd& a) {
    return std::sqrt(std::max(0.0, l2_inner(grid, a, a)));
}

double max_abs(const Eigen::MatrixXd& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace optload
