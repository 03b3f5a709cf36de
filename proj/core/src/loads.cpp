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
#include "optload/loads.hpp"

#include <span>
#include <string>
#include <type_traits>

#include "optload/dual.hpp"
#include "optload/errors.hpp"
#include "optload/linalg.hpp"

namespace optload {

namespace {

using Dual3 = Dual<Dual<Dual1>>;

std::vector<Variable> all_variables(std::size_t n, std::size_t m) {
    std::vector<Variable> vars;
    for (std::size_t i = 0; i < n; ++i) vars.push_back(Variable::state(i));
    for (std::size_t j = 0; j < m; ++j) vars.push_back(Variable::input(j));
    return vars;
}

// Hessian of H in x and its derivative along the direction xdot.
void hessian_and_rate(const Expr& H, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& xdot, Eigen::MatrixXd& hess, Eigen::MatrixXd& rate) {
    const auto n = static_cast<std::size_t>(x.size());
    std::vector<Dual3> vars;
    vars.reserve(n + static_cast<std::size_t>(u.size()));
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        vars.push_back(seed_second_over(Dual1(x(ii), {xdot(ii)}), i, n));
    }
    for (Eigen::Index j = 0; j < u.size(); ++j) vars.emplace_back(u(j));
    const Dual3 r = H.eval_as<Dual3>(std::span<const Dual3>(vars));
    hess.resize(x.size(), x.size());
    rate.resize(x.size(), x.size());
    for (std::size_t i = 0; i < n; ++i) {
        const Dual<Dual1>& gi = r.partial(i);
        for (std::size_t j = 0; j < n; ++j) {
            const Dual1& hij = gi.partial(j);
            hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = hij.v;
            rate(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = hij.partial(0);
        }
    }
}

void require_invertible(const Eigen::MatrixXd& M, const std::string& what) {
    if (linalg::condition_number(M) >= linalg::kMaxCondition) {
        throw SingularCoordinateChange(what + " is singular (condition number >= 1e12)");
    }
}

LtvSystem constant_ltv(const LinearSystem& lin, const UniformGrid& grid) {
    LtvSystem sys;
    sys.grid = grid;
    sys.samples.assign(grid.half_points(), {lin.A, lin.B, lin.C, lin.D});
    return sys;
}

void require_samples(std::size_t count, const UniformGrid& own, const UniformGrid& grid) {
    if (own.N != grid.N || own.T != grid.T || count != grid.half_points()) {
        throw DimensionError("structured load was sampled on a different grid");
    }
}

}  // namespace

TrajectoryLoad load_from_solution(const ProblemSpec& spec, const BvpSolution& sol) {
    const GenericSystem& sys = spec.sys;
    const Trajectory& tr = sol.traj;
    const auto n = static_cast<Eigen::Index>(sys.state_dim());
    const auto m = static_cast<Eigen::Index>(sys.io_dim());
    const auto rows = static_cast<Eigen::Index>(tr.grid.points());

    TrajectoryLoad load;
    load.adjoint = adjoint_along(sys, tr);
    load.p = tr.p;
    load.yL.resize(rows, m);
    for (Eigen::Index k = 0; k < rows; ++k) {
        const Eigen::VectorXd x = n > 0 ? Eigen::VectorXd(tr.x.row(k).transpose()) : Eigen::VectorXd(0);
        const Eigen::VectorXd p = n > 0 ? Eigen::VectorXd(tr.p.row(k).transpose()) : Eigen::VectorXd(0);
        const Eigen::VectorXd u = tr.u.row(k).transpose();
        const Jacobians J = sys.jacobians(x, u);
        const Eigen::VectorXd yL = J.fu.transpose() * p + J.hu.transpose() * u;
        load.yL.row(k) = yL.transpose();
        const Eigen::VectorXd gap =
            spec.source(tr.grid.t(static_cast<std::size_t>(k))) - tr.y.row(k).transpose() - yL;
        load.consistency_error = std::max(load.consistency_error, gap.cwiseAbs().maxCoeff());
    }
    if (load.consistency_error > kLoadConsistencyTol) {
        throw ConsistencyViolation("y_S = y + y_L violated by " + std::to_string(load.consistency_error));
    }
    return load;
}

PortHamiltonianLinear structured_adjoint(const PortHamiltonianLinear& s) {
    return {-s.J, s.R, -s.Q, -s.B, s.D.transpose()};
}

GradientLinear structured_adjoint(const GradientLinear& s) { return {-s.G, s.P, s.C, s.D}; }

StructuredLoad structured_adjoint(const StructuredSystem& s, const Trajectory* traj) {
    validate(s);
    return std::visit(
        [&](const auto& v) -> StructuredLoad {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PortHamiltonianLinear> || std::is_same_v<T, GradientLinear>) {
                return structured_adjoint(v);
            } else if constexpr (std::is_same_v<T, PortHamiltonianNonlinear> ||
                                 std::is_same_v<T, GradientNonlinear>) {
                if (traj == nullptr) {
                    throw InvalidArgument("the " + class_name(s) + " adjoint needs an evaluation trajectory");
                }
                const GenericSystem sys = to_generic(s);
                const HalfGridPoints pts = half_grid_points(sys, *traj);
                if constexpr (std::is_same_v<T, PortHamiltonianNonlinear>) {
                    PortHamiltonianAlongTrajectory out{-v.J, v.R, -v.B, v.D.transpose(), traj->grid, {}, {}};
                    for (std::size_t j = 0; j < pts.x.size(); ++j) {
                        const Eigen::VectorXd xdot = sys.f_value(pts.x[j], pts.u[j]);
                        Eigen::MatrixXd hess;
                        Eigen::MatrixXd rate;
                        hessian_and_rate(v.H, pts.x[j], pts.u[j], xdot, hess, rate);
                        require_invertible(hess, "Hessian of H at t=" + std::to_string(traj->grid.t_half(j)));
                        out.Q.push_back(-hess);
                        out.correction.push_back(-hess.partialPivLu().solve(rate));
                    }
                    return out;
                } else {
                    const std::size_t n = sys.state_dim();
                    const std::size_t m = sys.io_dim();
                    const auto ni = static_cast<Eigen::Index>(n);
                    const auto mi = static_cast<Eigen::Index>(m);
                    const std::vector<Variable> active = all_variables(n, m);
                    GradientAlongTrajectory out{-v.G, traj->grid, {}, {}, {}, {}};
                    for (std::size_t j = 0; j < pts.x.size(); ++j) {
                        const Dual2 d = v.V.eval_d2(std::span<const double>(pts.x[j].data(), n),
                                                    std::span<const double>(pts.u[j].data(), m), active);
                        out.Vxx.push_back(d.hess.topLeftCorner(ni, ni));
                        out.Vxu.push_back(d.hess.topRightCorner(ni, mi));
                        out.Vux.push_back(d.hess.bottomLeftCorner(mi, ni));
                        out.Vuu.push_back(d.hess.bottomRightCorner(mi, mi));
                    }
                    return out;
                }
            } else {
                throw UnsupportedClass("no structured adjoint for class '" + class_name(s) + "'");
            }
        },
        s);
}

LtvSystem to_ltv(const StructuredLoad& load, const UniformGrid& grid) {
    return std::visit(
        [&](const auto& v) -> LtvSystem {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PortHamiltonianLinear> || std::is_same_v<T, GradientLinear>) {
                return constant_ltv(linear_realization(v), grid);
            } else if constexpr (std::is_same_v<T, PortHamiltonianAlongTrajectory>) {
                require_samples(v.Q.size(), v.grid, grid);
                LtvSystem sys;
                sys.grid = grid;
                const Eigen::MatrixXd JR = v.J - v.R;
                for (std::size_t j = 0; j < v.Q.size(); ++j) {
                    sys.samples.push_back({JR * v.Q[j] + v.correction[j], v.B, v.B.transpose() * v.Q[j], v.D});
                }
                return sys;
            } else {
                require_samples(v.Vxx.size(), v.grid, grid);
                const Eigen::MatrixXd Ginv = linalg::checked_inverse(v.G, "G");
                LtvSystem sys;
                sys.grid = grid;
                for (std::size_t j = 0; j < v.Vxx.size(); ++j) {
                    sys.samples.push_back({-(Ginv * v.Vxx[j]), -(Ginv * v.Vxu[j]), -v.Vux[j], -v.Vuu[j]});
                }
                return sys;
            }
        },
        load);
}

StructureReport verify_structure(const StructuredSystem& s, const Trajectory& traj) {
    StructureReport rep;
    if (const auto* ph = std::get_if<PortHamiltonianLinear>(&s)) require_invertible(ph->Q, "Q");
    if (const auto* gl = std::get_if<GradientLinear>(&s)) require_invertible(gl->G, "G");

    const StructuredLoad load = structured_adjoint(s, &traj);
    const GenericSystem sys = to_generic(s);
    const LtvSystem generic = adjoint_along(sys, traj);
    const LtvSystem structured = to_ltv(load, traj.grid);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.state_dim()));
    const LtvResponse a = simulate_ltv(generic, zero, traj.u, Direction::Backward);
    const LtvResponse b = simulate_ltv(structured, zero, traj.u, Direction::Backward);
    rep.max_discrepancy = max_abs(a.output - b.output);

    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PortHamiltonianLinear>) {
                rep.structure_preserved = linalg::is_skew(v.J) && linalg::is_psd(v.R) &&
                                          linalg::is_symmetric(v.Q);
                rep.storage_nonpositive = linalg::is_psd(-v.Q);
            } else if constexpr (std::is_same_v<T, GradientLinear>) {
                rep.structure_preserved = linalg::is_symmetric(v.G) && linalg::is_symmetric(v.P);
            } else if constexpr (std::is_same_v<T, PortHamiltonianAlongTrajectory>) {
                bool ok = linalg::is_skew(v.J) && linalg::is_psd(v.R);
                bool nonpositive = true;
                for (const auto& Q : v.Q) {
                    ok = ok && linalg::is_symmetric(Q);
                    nonpositive = nonpositive && linalg::is_psd(-Q);
                }
                rep.structure_preserved = ok;
                rep.storage_nonpositive = nonpositive;
            } else {
                rep.structure_preserved = linalg::is_symmetric(v.G);
            }
        },
        load);
    return rep;
}

}  // namespace optload
