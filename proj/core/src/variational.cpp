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
#include "optload/variational.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optload/errors.hpp"

namespace optload {

namespace {

void check_trajectory(const GenericSystem& sys, const Trajectory& traj) {
    traj.grid.validate();
    const auto rows = static_cast<Eigen::Index>(traj.grid.points());
    if (traj.u.rows() != rows || traj.u.cols() != static_cast<Eigen::Index>(sys.io_dim())) {
        throw DimensionError("trajectory input column does not match the grid and system");
    }
    if (sys.state_dim() > 0 &&
        (traj.x.rows() != rows || traj.x.cols() != static_cast<Eigen::Index>(sys.state_dim()))) {
        throw DimensionError("trajectory state column does not match the grid and system");
    }
}

Eigen::VectorXd state_row(const GenericSystem& sys, const Trajectory& traj, std::size_t k) {
    if (sys.state_dim() == 0) return Eigen::VectorXd(0);
    return traj.x.row(static_cast<Eigen::Index>(k)).transpose();
}

}  // namespace

LtvSystem::Matrices LtvSystem::at(double t) const {
    const double s = std::clamp(t / grid.step() * 2.0, 0.0, static_cast<double>(2 * grid.N));
    auto j = static_cast<std::size_t>(std::floor(s));
    if (j >= 2 * grid.N) return samples.back();
    const double theta = s - static_cast<double>(j);
    const auto& a = samples[j];
    const auto& b = samples[j + 1];
    return {(1.0 - theta) * a.A + theta * b.A, (1.0 - theta) * a.B + theta * b.B,
            (1.0 - theta) * a.C + theta * b.C, (1.0 - theta) * a.D + theta * b.D};
}

void LtvSystem::validate() const {
    grid.validate();
    if (samples.size() != grid.half_points()) {
        throw DimensionError("LTV system needs one sample per half-grid point");
    }
    const auto& s0 = samples.front();
    const auto n = s0.A.rows();
    const auto mi = s0.B.cols();
    const auto mo = s0.C.rows();
    for (const auto& s : samples) {
        if (s.A.rows() != n || s.A.cols() != n || s.B.rows() != n || s.B.cols() != mi ||
            s.C.rows() != mo || s.C.cols() != n || s.D.rows() != mo || s.D.cols() != mi) {
            throw DimensionError("LTV samples have inconsistent shapes");
        }
    }
}

LtvSystem formal_adjoint(const LtvSystem& sys) {
    LtvSystem out;
    out.grid = sys.grid;
    out.samples.reserve(sys.samples.size());
    for (const auto& s : sys.samples) {
        out.samples.push_back({-s.A.transpose(), -s.C.transpose(), s.B.transpose(), s.D.transpose()});
    }
    return out;
}

HalfGridPoints half_grid_points(const GenericSystem& sys, const Trajectory& traj) {
    check_trajectory(sys, traj);
    const std::size_t N = traj.grid.N;
    const double h = traj.grid.step();
    HalfGridPoints pts;
    pts.x.resize(2 * N + 1);
    pts.u.resize(2 * N + 1);
    std::vector<Eigen::VectorXd> slopes(N + 1);
    for (std::size_t k = 0; k <= N; ++k) {
        pts.x[2 * k] = state_row(sys, traj, k);
        pts.u[2 * k] = traj.u.row(static_cast<Eigen::Index>(k)).transpose();
        slopes[k] = sys.state_dim() > 0 ? sys.f_value(pts.x[2 * k], pts.u[2 * k]) : Eigen::VectorXd(0);
    }
    for (std::size_t k = 0; k < N; ++k) {
        pts.x[2 * k + 1] =
            hermite_midpoint(pts.x[2 * k], pts.x[2 * k + 2], slopes[k], slopes[k + 1], h);
        pts.u[2 * k + 1] = half_row(traj.u, 2 * k + 1);
    }
    return pts;
}

LtvSystem variational_along(const GenericSystem& sys, const Trajectory& traj) {
    const HalfGridPoints pts = half_grid_points(sys, traj);
    LtvSystem out;
    out.grid = traj.grid;
    out.samples.reserve(pts.x.size());
    for (std::size_t j = 0; j < pts.x.size(); ++j) {
        try {
            Jacobians J = sys.jacobians(pts.x[j], pts.u[j]);
            out.samples.push_back({std::move(J.fx), std::move(J.fu), std::move(J.hx), std::move(J.hu)});
        } catch (const DomainError& e) {
            throw DomainError(std::string("at t=") + std::to_string(traj.grid.t_half(j)) + ": " +
                                  e.what(),
                              e.subexpression());
        }
    }
    return out;
}

LtvSystem adjoint_along(const GenericSystem& sys, const Trajectory& traj) {
    return formal_adjoint(variational_along(sys, traj));
}

LtvResponse simulate_ltv(const LtvSystem& sys, const Eigen::VectorXd& boundary,
                         const Eigen::MatrixXd& input, Direction dir,
                         const Eigen::MatrixXd* output_weight) {
    sys.validate();
    const auto n = static_cast<Eigen::Index>(sys.state_dim());
    const auto rows = static_cast<Eigen::Index>(sys.grid.points());
    if (boundary.size() != n) throw DimensionError("LTV boundary state has wrong dimension");
    if (input.rows() != rows || input.cols() != static_cast<Eigen::Index>(sys.input_dim())) {
        throw DimensionError("LTV input signal does not match grid/input dimension");
    }
    const bool weighted = output_weight != nullptr;
    if (weighted && (output_weight->rows() != rows ||
                     output_weight->cols() != static_cast<Eigen::Index>(sys.output_dim()))) {
        throw DimensionError("LTV output weight does not match grid/output dimension");
    }

    auto rhs = [&](const Stage& s, const Eigen::VectorXd& z) -> Eigen::VectorXd {
        const auto& M = sys.samples[s.half];
        const Eigen::VectorXd w = half_row(input, s.half);
        Eigen::VectorXd dz(z.size());
        dz.head(n) = M.A * z.head(n) + M.B * w;
        if (weighted) {
            const Eigen::VectorXd out = M.C * z.head(n) + M.D * w;
            dz(n) = half_row(*output_weight, s.half).dot(out);
        }
        return dz;
    };

    const std::size_t N = sys.grid.N;
    LtvResponse res;
    res.state.resize(rows, n);
    Eigen::VectorXd z(n + (weighted ? 1 : 0));
    z.head(n) = boundary;
    if (weighted) z(n) = 0.0;

    if (dir == Direction::Forward) {
        res.state.row(0) = boundary.transpose();
        for (std::size_t k = 0; k < N; ++k) {
            z = rk4_step(rhs, sys.grid, k, z, Direction::Forward);
            res.state.row(static_cast<Eigen::Index>(k + 1)) = z.head(n).transpose();
        }
        if (weighted) res.weighted_output_integral = z(n);
    } else {
        res.state.row(rows - 1) = boundary.transpose();
        for (std::size_t k = N; k-- > 0;) {
            z = rk4_step(rhs, sys.grid, k, z, Direction::Backward);
            res.state.row(static_cast<Eigen::Index>(k)) = z.head(n).transpose();
        }
        // Integrated from T down to 0, so the accumulator holds -int_0^T.
        if (weighted) res.weighted_output_integral = -z(n);
    }

    res.output.resize(rows, static_cast<Eigen::Index>(sys.output_dim()));
    for (std::size_t k = 0; k <= N; ++k) {
        const auto& M = sys.samples[2 * k];
        const auto ki = static_cast<Eigen::Index>(k);
        res.output.row(ki) =
            (M.C * res.state.row(ki).transpose() + M.D * input.row(ki).transpose()).transpose();
    }
    return res;
}

DualityTerms duality_terms(const GenericSystem& sys, const Trajectory& traj,
                           const Eigen::MatrixXd& du, const Eigen::MatrixXd& ua) {
    const LtvSystem var = variational_along(sys, traj);
    const LtvSystem adj = formal_adjoint(var);
    const auto n = static_cast<Eigen::Index>(sys.state_dim());

    const LtvResponse fwd = simulate_ltv(var, Eigen::VectorXd::Zero(n), du, Direction::Forward, &ua);
    const LtvResponse bwd = simulate_ltv(adj, Eigen::VectorXd::Zero(n), ua, Direction::Backward, &du);

    DualityTerms terms;
    terms.ua_dy = fwd.weighted_output_integral;
    terms.ya_du = bwd.weighted_output_integral;
    const Eigen::Index last = fwd.state.rows() - 1;
    terms.boundary = bwd.state.row(last).dot(fwd.state.row(last)) - bwd.state.row(0).dot(fwd.state.row(0));
    terms.residual = std::abs(terms.ya_du - terms.ua_dy - terms.boundary);
    return terms;
}

double duality_residual(const GenericSystem& sys, const Trajectory& traj,
                        const Eigen::MatrixXd& du, const Eigen::MatrixXd& ua) {
    return duality_terms(sys, traj, du, ua).residual;
}

}  // namespace optload
