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
#include "optload/solver.hpp"

#include <cmath>
#include <string>

#include "optload/errors.hpp"

namespace optload {

namespace {

double inf_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

template <class E>
[[noreturn]] void rethrow_at(const E& e, double t) {
    throw E(std::string(e.what()) + " (at t=" + std::to_string(t) + ")");
}

}  // namespace

void ProblemSpec::validate() const {
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("horizon T must be positive");
    if (N < 10) throw InvalidArgument("grid needs N >= 10 steps");
    if (static_cast<std::size_t>(x0.size()) != sys.state_dim()) {
        throw DimensionError("x0 has dimension " + std::to_string(x0.size()) + ", system has n=" +
                             std::to_string(sys.state_dim()));
    }
    if (source.dim() != sys.io_dim()) {
        throw DimensionError("source has dimension " + std::to_string(source.dim()) +
                             ", system has m=" + std::to_string(sys.io_dim()));
    }
    source.check_covers(T);
}

Simulation simulate(const GenericSystem& sys, const Eigen::VectorXd& x0, const UniformGrid& grid,
                    const Eigen::MatrixXd& u, const SourceSignal* source) {
    grid.validate();
    const auto n = static_cast<Eigen::Index>(sys.state_dim());
    const auto m = static_cast<Eigen::Index>(sys.io_dim());
    const auto rows = static_cast<Eigen::Index>(grid.points());
    if (x0.size() != n) throw DimensionError("x0 does not match the state dimension");
    if (u.rows() != rows || u.cols() != m) throw DimensionError("input signal does not match grid/m");
    if (source && source->dim() != sys.io_dim()) throw DimensionError("source dimension mismatch");

    auto rhs = [&](const Stage& s, const Eigen::VectorXd& z) -> Eigen::VectorXd {
        const Eigen::VectorXd us = half_row(u, s.half);
        const SystemEvaluation e = sys.rhs(z.head(n), us);
        Eigen::VectorXd dz(n + 1);
        dz.head(n) = e.xdot;
        Eigen::VectorXd mismatch = e.y;
        if (source) mismatch -= (*source)(s.t);
        dz(n) = mismatch.dot(us);
        return dz;
    };

    Simulation sim;
    sim.traj.grid = grid;
    sim.traj.x.resize(rows, n);
    sim.traj.u = u;
    sim.traj.y.resize(rows, m);
    Eigen::VectorXd z(n + 1);
    z << x0, 0.0;
    sim.traj.x.row(0) = x0.transpose();
    for (std::size_t k = 0; k < grid.N; ++k) {
        z = rk4_step(rhs, grid, k, z, Direction::Forward);
        sim.traj.x.row(static_cast<Eigen::Index>(k + 1)) = z.head(n).transpose();
    }
    for (Eigen::Index k = 0; k < rows; ++k) {
        sim.traj.y.row(k) = sys.h_value(sim.traj.x.row(k).transpose(), u.row(k).transpose()).transpose();
    }
    sim.power = z(n);
    return sim;
}

SigmaTimesRun integrate_sigma_times(const HamiltonianSystem& hs, const ProblemSpec& spec,
                                    const Eigen::VectorXd& p0) {
    const GenericSystem& sys = hs.base();
    const auto n = static_cast<Eigen::Index>(sys.state_dim());
    const auto m = static_cast<Eigen::Index>(sys.io_dim());
    if (p0.size() != n) throw DimensionError("p0 does not match the state dimension");
    const UniformGrid grid = spec.grid();
    const auto rows = static_cast<Eigen::Index>(grid.points());

    SigmaTimesRun run;
    Eigen::VectorXd warm = Eigen::VectorXd::Zero(m);

    auto solve_input = [&](double t, const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                           const Eigen::VectorXd& target) -> Eigen::VectorXd {
        try {
            InputSolution s = hs.invert_input(x, p, target, warm, spec.options.newton);
            run.newton_iterations += s.iterations;
            warm = s.u;
            return s.u;
        } catch (const SingularHessian& e) {
            rethrow_at(e, t);
        } catch (const NoConvergence& e) {
            rethrow_at(e, t);
        }
    };

    auto rhs = [&](const Stage& s, const Eigen::VectorXd& z) -> Eigen::VectorXd {
        const Eigen::VectorXd x = z.head(n);
        const Eigen::VectorXd p = z.segment(n, n);
        const Eigen::VectorXd target = spec.source(s.t);
        const Eigen::VectorXd u = solve_input(s.t, x, p, target);
        const Jacobians J = sys.jacobians(x, u);
        const SystemEvaluation e = sys.rhs(x, u);
        Eigen::VectorXd dz(2 * n + 1);
        dz.head(n) = e.xdot;
        dz.segment(n, n) = -J.fx.transpose() * p - J.hx.transpose() * u;
        dz(2 * n) = (e.y - target).dot(u);
        return dz;
    };

    Trajectory& tr = run.traj;
    tr.grid = grid;
    tr.x.resize(rows, n);
    tr.p.resize(rows, n);
    tr.u.resize(rows, m);
    tr.y.resize(rows, m);
    tr.yplus.resize(rows, m);

    auto record = [&](std::size_t k, const Eigen::VectorXd& z) {
        const double t = grid.t(k);
        const Eigen::VectorXd x = z.head(n);
        const Eigen::VectorXd p = z.segment(n, n);
        const Eigen::VectorXd u = solve_input(t, x, p, spec.source(t));
        const auto ki = static_cast<Eigen::Index>(k);
        tr.x.row(ki) = x.transpose();
        tr.p.row(ki) = p.transpose();
        tr.u.row(ki) = u.transpose();
        tr.y.row(ki) = sys.h_value(x, u).transpose();
        tr.yplus.row(ki) = hs.yplus(x, p, u).transpose();
    };

    Eigen::VectorXd z(2 * n + 1);
    z << spec.x0, p0, 0.0;
    record(0, z);
    for (std::size_t k = 0; k < grid.N; ++k) {
        // Warm start each step from the recorded node input.
        warm = tr.u.row(static_cast<Eigen::Index>(k)).transpose();
        z = rk4_step(rhs, grid, k, z, Direction::Forward);
        record(k + 1, z);
    }
    run.power = z(2 * n);
    return run;
}

SigmaTimesRun integrate_sigma_times(const ProblemSpec& spec, const Eigen::VectorXd& p0) {
    spec.validate();
    const HamiltonianSystem hs(spec.sys);
    return integrate_sigma_times(hs, spec, p0);
}

BvpSolution solve_optimal_input(const ProblemSpec& spec) {
    spec.validate();
    const HamiltonianSystem hs(spec.sys);
    const auto n = static_cast<Eigen::Index>(spec.sys.state_dim());
    const SolverOptions& opt = spec.options;

    Eigen::VectorXd p0 = Eigen::VectorXd::Zero(n);
    SigmaTimesRun run = integrate_sigma_times(hs, spec, p0);
    std::size_t iterations = 0;

    auto terminal = [n](const SigmaTimesRun& r) -> Eigen::VectorXd {
        return r.traj.p.row(r.traj.p.rows() - 1).transpose().head(n);
    };

    if (n > 0) {
        const bool affine = spec.sys.linear().has_value();
        Eigen::VectorXd pT = terminal(run);
        double rn = inf_norm(pT);
        while (rn > opt.shooting_tolerance) {
            if (iterations >= opt.max_shooting_iterations) {
                throw ShootingDivergence("shooting residual |p(T)| = " + std::to_string(rn) +
                                         " after " + std::to_string(iterations) + " iterations");
            }
            Eigen::MatrixXd jac(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                const double delta = affine ? 1.0 : opt.fd_step * std::max(1.0, std::abs(p0(i)));
                Eigen::VectorXd probe = p0;
                probe(i) += delta;
                jac.col(i) = (terminal(integrate_sigma_times(hs, spec, probe)) - pT) / delta;
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
            if (!lu.isInvertible()) throw ShootingDivergence("shooting Jacobian dp(T)/dp(0) is singular");
            const Eigen::VectorXd step = -lu.solve(pT);

            bool accepted = false;
            double lambda = 1.0;
            for (std::size_t h = 0; h <= opt.max_shooting_halvings; ++h, lambda *= 0.5) {
                const Eigen::VectorXd trial = p0 + lambda * step;
                SigmaTimesRun candidate;
                try {
                    candidate = integrate_sigma_times(hs, spec, trial);
                } catch (const NoConvergence&) {
                    continue;
                } catch (const SingularHessian&) {
                    continue;
                } catch (const DomainError&) {
                    continue;
                }
                const Eigen::VectorXd cT = terminal(candidate);
                const double cn = inf_norm(cT);
                if (std::isfinite(cn) && cn < rn) {
                    p0 = trial;
                    run = std::move(candidate);
                    pT = cT;
                    rn = cn;
                    accepted = true;
                    break;
                }
            }
            ++iterations;
            if (!accepted) {
                throw ShootingDivergence("no decrease of |p(T)| along the Newton direction (residual " +
                                         std::to_string(rn) + ")");
            }
        }
    }

    BvpSolution sol;
    sol.p0 = p0;
    sol.shooting_residual = n > 0 ? inf_norm(terminal(run)) : 0.0;
    sol.shooting_iterations = iterations;
    sol.newton_iterations = run.newton_iterations;
    sol.extracted_energy = -run.power;
    sol.traj = std::move(run.traj);
    return sol;
}

double residual_first_order(const ProblemSpec& spec, const BvpSolution& sol) {
    const HamiltonianSystem hs(spec.sys);
    const Trajectory& tr = sol.traj;
    const auto n = static_cast<Eigen::Index>(spec.sys.state_dim());
    double worst = 0.0;
    for (std::size_t k = 0; k < tr.grid.points(); ++k) {
        const auto ki = static_cast<Eigen::Index>(k);
        const Eigen::VectorXd x = n > 0 ? Eigen::VectorXd(tr.x.row(ki).transpose()) : Eigen::VectorXd(0);
        const Eigen::VectorXd p = n > 0 ? Eigen::VectorXd(tr.p.row(ki).transpose()) : Eigen::VectorXd(0);
        const Eigen::VectorXd u = tr.u.row(ki).transpose();
        worst = std::max(worst, inf_norm(hs.yplus(x, p, u) - spec.source(tr.grid.t(k))));
    }
    return worst;
}

}  // namespace optload
