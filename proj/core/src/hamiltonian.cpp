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
#include "optload/hamiltonian.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "optload/errors.hpp"
#include "optload/linalg.hpp"

namespace optload {

namespace {

double inf_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

HamiltonianSystem::HamiltonianSystem(GenericSystem base) : base_(std::move(base)) {
    if (const auto& lin = base_.linear()) {
        sym_feedthrough_ = lin->D + lin->D.transpose();
        linear_invertible_ = linalg::condition_number(sym_feedthrough_) < linalg::kMaxCondition;
        if (linear_invertible_) sym_feedthrough_lu_.compute(sym_feedthrough_);
    }
}

void HamiltonianSystem::check(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                              const Eigen::VectorXd& u) const {
    base_.check_point(x, u);
    if (p.size() != x.size()) throw DimensionError("co-state p must have the dimension of x");
}

double HamiltonianSystem::hplus(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                                const Eigen::VectorXd& u) const {
    check(x, p, u);
    const SystemEvaluation e = base_.rhs(x, u);
    return p.dot(e.xdot) + u.dot(e.y);
}

SigmaPlusRhs HamiltonianSystem::sigma_plus_rhs(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                                               const Eigen::VectorXd& u) const {
    check(x, p, u);
    const Jacobians J = base_.jacobians(x, u);
    SigmaPlusRhs out;
    out.xdot = base_.f_value(x, u);
    out.pdot = -J.fx.transpose() * p - J.hx.transpose() * u;
    out.yplus = J.fu.transpose() * p + base_.h_value(x, u) + J.hu.transpose() * u;
    return out;
}

Eigen::VectorXd HamiltonianSystem::yplus(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                                         const Eigen::VectorXd& u) const {
    check(x, p, u);
    if (const auto& lin = base_.linear()) {
        return lin->C * x + lin->B.transpose() * p + sym_feedthrough_ * u;
    }
    const Jacobians J = base_.jacobians(x, u);
    return J.fu.transpose() * p + base_.h_value(x, u) + J.hu.transpose() * u;
}

HamiltonianSystem::InputDerivatives HamiltonianSystem::input_derivatives(
    const Eigen::VectorXd& x, const Eigen::VectorXd& p, const Eigen::VectorXd& u) const {
    const std::size_t n = base_.state_dim();
    const std::size_t m = base_.io_dim();
    InputDerivatives out;
    if (const auto& lin = base_.linear()) {
        out.grad = lin->C * x + lin->B.transpose() * p + sym_feedthrough_ * u;
        out.hess = sym_feedthrough_;
        return out;
    }
    std::vector<Dual2Scalar> vars;
    vars.reserve(n + m);
    for (Eigen::Index i = 0; i < x.size(); ++i) vars.emplace_back(x(i));
    for (Eigen::Index j = 0; j < u.size(); ++j) {
        vars.push_back(seed_second(u(j), static_cast<std::size_t>(j), m));
    }
    Dual2Scalar H(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        H = H + p(static_cast<Eigen::Index>(i)) * base_.f()[i].eval_as<Dual2Scalar>(vars);
    }
    for (std::size_t j = 0; j < m; ++j) {
        H = H + vars[n + j] * base_.h()[j].eval_as<Dual2Scalar>(vars);
    }
    const auto mi = static_cast<Eigen::Index>(m);
    out.grad.resize(mi);
    out.hess.resize(mi, mi);
    for (std::size_t i = 0; i < m; ++i) {
        const Dual1& row = H.partial(i);
        const auto ii = static_cast<Eigen::Index>(i);
        out.grad(ii) = row.v;
        for (std::size_t j = i; j < m; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            out.hess(ii, jj) = row.partial(j);
            out.hess(jj, ii) = out.hess(ii, jj);
        }
    }
    return out;
}

Eigen::MatrixXd HamiltonianSystem::partial_hessian(const Eigen::VectorXd& x,
                                                   const Eigen::VectorXd& p,
                                                   const Eigen::VectorXd& u) const {
    check(x, p, u);
    return input_derivatives(x, p, u).hess;
}

InputSolution HamiltonianSystem::invert_input(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                                              const Eigen::VectorXd& target,
                                              const Eigen::VectorXd& guess,
                                              const NewtonOptions& options) const {
    const auto m = static_cast<Eigen::Index>(base_.io_dim());
    if (target.size() != m) throw DimensionError("target y+ must have dimension m");
    Eigen::VectorXd u = guess.size() == m ? guess : Eigen::VectorXd::Zero(m);
    check(x, p, u);

    if (const auto& lin = base_.linear()) {
        if (!linear_invertible_) {
            throw SingularHessian("D + D^T is singular; the Hamiltonian system has no inverse");
        }
        InputSolution sol;
        sol.u = sym_feedthrough_lu_.solve(target - lin->C * x - lin->B.transpose() * p);
        sol.residual = inf_norm(yplus(x, p, sol.u) - target);
        return sol;
    }

    InputDerivatives d = input_derivatives(x, p, u);
    Eigen::VectorXd r = d.grad - target;
    double rn = inf_norm(r);
    auto regular_svd = [](const Eigen::MatrixXd& hess) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(hess, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& s = svd.singularValues();
        const double smin = s(s.size() - 1);
        if (!(smin > 0.0) || !(s(0) / smin < linalg::kMaxCondition)) {
            throw SingularHessian("partial Hessian d2H+/du2 is singular (condition number " +
                                  std::to_string(smin > 0.0 ? s(0) / smin : INFINITY) + ")");
        }
        return svd;
    };
    for (std::size_t it = 0; it <= options.max_iterations; ++it) {
        const auto svd = regular_svd(d.hess);
        if (rn <= options.tolerance) return {u, rn, it};
        if (it == options.max_iterations) break;
        const Eigen::VectorXd step = -svd.solve(r);

        double lambda = 1.0;
        bool accepted = false;
        for (std::size_t k = 0; k <= options.max_halvings; ++k, lambda *= 0.5) {
            const Eigen::VectorXd trial = u + lambda * step;
            InputDerivatives dt;
            try {
                dt = input_derivatives(x, p, trial);
            } catch (const DomainError&) {
                continue;
            }
            const Eigen::VectorXd rt = dt.grad - target;
            const double rtn = inf_norm(rt);
            if (rtn < rn) {
                u = trial;
                d = std::move(dt);
                r = rt;
                rn = rtn;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            throw NoConvergence("Newton line search failed to reduce |dH+/du - y+| (residual " +
                                std::to_string(rn) + ")");
        }
    }
    throw NoConvergence("Newton iteration budget exhausted solving y+ = dH+/du (residual " +
                        std::to_string(rn) + ")");
}

double HamiltonianSystem::htimes(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                                 const Eigen::VectorXd& yplus_target, const Eigen::VectorXd& guess,
                                 const NewtonOptions& options) const {
    const InputSolution sol = invert_input(x, p, yplus_target, guess, options);
    return hplus(x, p, sol.u) - sol.u.dot(yplus_target);
}

LinearSystem sigma_plus_realization(const LinearSystem& sys) {
    const Eigen::Index n = sys.A.rows();
    const Eigen::Index m = sys.D.rows();
    LinearSystem out;
    out.A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    out.A.topLeftCorner(n, n) = sys.A;
    out.A.bottomRightCorner(n, n) = -sys.A.transpose();
    out.B.resize(2 * n, m);
    out.B << sys.B, -sys.C.transpose();
    out.C.resize(m, 2 * n);
    out.C << sys.C, sys.B.transpose();
    out.D = sys.D + sys.D.transpose();
    return out;
}

}  // namespace optload
