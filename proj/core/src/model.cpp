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
#include "optload/model.hpp"

#include <type_traits>

#include "optload/errors.hpp"
#include "optload/linalg.hpp"

namespace optload {

namespace {

void require_shape(const Eigen::MatrixXd& M, Eigen::Index rows, Eigen::Index cols,
                   const std::string& name) {
    if (M.rows() != rows || M.cols() != cols) {
        throw DimensionError(name + " must be " + std::to_string(rows) + "x" +
                             std::to_string(cols) + ", got " + std::to_string(M.rows()) + "x" +
                             std::to_string(M.cols()));
    }
}

void require_symmetric(const Eigen::MatrixXd& M, const std::string& name) {
    if (!linalg::is_symmetric(M)) throw InvalidArgument(name + " must be symmetric");
}

void require_psd(const Eigen::MatrixXd& M, const std::string& name) {
    require_symmetric(M, name);
    if (!linalg::is_psd(M)) throw InvalidArgument(name + " must be positive semidefinite");
}

void require_skew(const Eigen::MatrixXd& M, const std::string& name) {
    if (!linalg::is_skew(M)) throw InvalidArgument(name + " must be skew-symmetric");
}

void require_well_conditioned(const Eigen::MatrixXd& M, const std::string& name) {
    if (!(linalg::condition_number(M) < linalg::kMaxCondition)) {
        throw InvalidArgument(name + " must be invertible (condition number < 1e12)");
    }
}

/// sum_j coeffs(j) * terms[j], skipping exact zeros.
Expr linear_combination(const Eigen::RowVectorXd& coeffs, const std::vector<Expr>& terms,
                        std::size_t n, std::size_t m) {
    Expr acc = Expr::constant(0.0, n, m);
    for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
        const double c = coeffs(j);
        if (c == 0.0) continue;
        acc = acc + c * terms[static_cast<std::size_t>(j)];
    }
    return acc;
}

std::vector<Expr> state_vars(std::size_t n, std::size_t m) {
    std::vector<Expr> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(Expr::variable(Variable::state(i), n, m));
    return v;
}

std::vector<Expr> input_vars(std::size_t n, std::size_t m) {
    std::vector<Expr> v;
    for (std::size_t j = 0; j < m; ++j) v.push_back(Expr::variable(Variable::input(j), n, m));
    return v;
}

void validate_linear(const LinearSystem& s) {
    const auto n = s.A.rows();
    const auto m = s.D.rows();
    require_shape(s.A, n, n, "A");
    require_shape(s.B, n, m, "B");
    require_shape(s.C, m, n, "C");
    require_shape(s.D, m, m, "D");
}

void validate_ph_matrices(const Eigen::MatrixXd& J, const Eigen::MatrixXd& R,
                          const Eigen::MatrixXd& B, const Eigen::MatrixXd& D) {
    const auto n = J.rows();
    const auto m = D.rows();
    require_shape(J, n, n, "J");
    require_shape(R, n, n, "R");
    require_shape(B, n, m, "B");
    require_shape(D, m, m, "D");
    require_skew(J, "J");
    require_psd(R, "R");
    require_psd(D, "D");
}

}  // namespace

std::string class_name(const StructuredSystem& s) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LinearSystem>) return "linear";
            else if constexpr (std::is_same_v<T, PortHamiltonianLinear>) return "port_hamiltonian_linear";
            else if constexpr (std::is_same_v<T, GradientLinear>) return "gradient_linear";
            else if constexpr (std::is_same_v<T, PortHamiltonianNonlinear>) return "port_hamiltonian";
            else if constexpr (std::is_same_v<T, GradientNonlinear>) return "gradient";
            else return "static";
        },
        s);
}

void validate(const StructuredSystem& s) {
    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LinearSystem>) {
                validate_linear(v);
            } else if constexpr (std::is_same_v<T, PortHamiltonianLinear>) {
                validate_ph_matrices(v.J, v.R, v.B, v.D);
                require_shape(v.Q, v.J.rows(), v.J.rows(), "Q");
                require_symmetric(v.Q, "Q");
            } else if constexpr (std::is_same_v<T, GradientLinear>) {
                const auto n = v.G.rows();
                const auto m = v.D.rows();
                require_shape(v.G, n, n, "G");
                require_shape(v.P, n, n, "P");
                require_shape(v.C, m, n, "C");
                require_shape(v.D, m, m, "D");
                require_symmetric(v.G, "G");
                require_well_conditioned(v.G, "G");
                require_symmetric(v.P, "P");
                require_symmetric(v.D, "D");
            } else if constexpr (std::is_same_v<T, PortHamiltonianNonlinear>) {
                validate_ph_matrices(v.J, v.R, v.B, v.D);
                if (v.H.state_dim() != static_cast<std::size_t>(v.J.rows()) ||
                    v.H.input_dim() != static_cast<std::size_t>(v.D.rows())) {
                    throw DimensionError("H must be an expression over (n, m)");
                }
                if (v.H.depends_on_input()) throw InvalidArgument("H must not depend on u");
            } else if constexpr (std::is_same_v<T, GradientNonlinear>) {
                const auto n = v.G.rows();
                require_shape(v.G, n, n, "G");
                require_symmetric(v.G, "G");
                require_well_conditioned(v.G, "G");
                if (v.V.state_dim() != static_cast<std::size_t>(n)) {
                    throw DimensionError("V must be an expression over (n, m)");
                }
            } else {
                if (v.h.empty()) throw DimensionError("static nonlinearity needs m >= 1 outputs");
                for (const auto& e : v.h) {
                    if (e.state_dim() != 0 || e.input_dim() != v.h.size()) {
                        throw DimensionError("static h must be expressions over (0, m)");
                    }
                }
            }
        },
        s);
}

GenericSystem::GenericSystem(std::size_t n, std::size_t m, std::vector<Expr> f,
                             std::vector<Expr> h, std::optional<LinearSystem> linear)
    : n_(n), m_(m), f_(std::move(f)), h_(std::move(h)), linear_(std::move(linear)) {
    if (m_ == 0) throw DimensionError("system needs at least one input");
    if (f_.size() != n_) throw DimensionError("f must have n components");
    if (h_.size() != m_) throw DimensionError("h must have m components");
    for (const auto& e : f_) {
        if (e.state_dim() != n_ || e.input_dim() != m_) {
            throw DimensionError("f expression bound to wrong dimensions");
        }
    }
    for (const auto& e : h_) {
        if (e.state_dim() != n_ || e.input_dim() != m_) {
            throw DimensionError("h expression bound to wrong dimensions");
        }
    }
    if (linear_) validate_linear(*linear_);
}

GenericSystem GenericSystem::from_strings(std::size_t n, std::size_t m,
                                          const std::vector<std::string>& f,
                                          const std::vector<std::string>& h,
                                          const ConstantMap& constants) {
    std::vector<Expr> fe;
    std::vector<Expr> he;
    for (const auto& s : f) fe.push_back(Expr::parse(s, n, m, constants));
    for (const auto& s : h) he.push_back(Expr::parse(s, n, m, constants));
    return GenericSystem(n, m, std::move(fe), std::move(he));
}

void GenericSystem::check_point(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    if (static_cast<std::size_t>(x.size()) != n_ || static_cast<std::size_t>(u.size()) != m_) {
        throw DimensionError("system expects x in R^" + std::to_string(n_) + " and u in R^" +
                             std::to_string(m_) + ", got " + std::to_string(x.size()) + " and " +
                             std::to_string(u.size()));
    }
}

Eigen::VectorXd GenericSystem::f_value(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    check_point(x, u);
    Eigen::VectorXd out(static_cast<Eigen::Index>(n_));
    if (linear_) {
        out = linear_->A * x + linear_->B * u;
        return out;
    }
    std::vector<double> vars(x.data(), x.data() + x.size());
    vars.insert(vars.end(), u.data(), u.data() + u.size());
    for (std::size_t i = 0; i < n_; ++i) {
        out(static_cast<Eigen::Index>(i)) = f_[i].eval_as<double>(vars);
    }
    return out;
}

Eigen::VectorXd GenericSystem::h_value(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    check_point(x, u);
    Eigen::VectorXd out(static_cast<Eigen::Index>(m_));
    if (linear_) {
        out = linear_->C * x + linear_->D * u;
        return out;
    }
    std::vector<double> vars(x.data(), x.data() + x.size());
    vars.insert(vars.end(), u.data(), u.data() + u.size());
    for (std::size_t j = 0; j < m_; ++j) {
        out(static_cast<Eigen::Index>(j)) = h_[j].eval_as<double>(vars);
    }
    return out;
}

SystemEvaluation GenericSystem::rhs(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    return {f_value(x, u), h_value(x, u)};
}

Jacobians GenericSystem::jacobians(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    check_point(x, u);
    const auto n = static_cast<Eigen::Index>(n_);
    const auto m = static_cast<Eigen::Index>(m_);
    Jacobians J;
    if (linear_) {
        J.fx = linear_->A;
        J.fu = linear_->B;
        J.hx = linear_->C;
        J.hu = linear_->D;
        return J;
    }
    const std::size_t k = n_ + m_;
    std::vector<Dual1> vars;
    vars.reserve(k);
    for (Eigen::Index i = 0; i < n; ++i) vars.push_back(seed_first(x(i), static_cast<std::size_t>(i), k));
    for (Eigen::Index j = 0; j < m; ++j) {
        vars.push_back(seed_first(u(j), n_ + static_cast<std::size_t>(j), k));
    }
    J.fx.resize(n, n);
    J.fu.resize(n, m);
    J.hx.resize(m, n);
    J.hu.resize(m, m);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Dual1 r = f_[static_cast<std::size_t>(i)].eval_as<Dual1>(vars);
        for (Eigen::Index j = 0; j < n; ++j) J.fx(i, j) = r.partial(static_cast<std::size_t>(j));
        for (Eigen::Index j = 0; j < m; ++j) J.fu(i, j) = r.partial(n_ + static_cast<std::size_t>(j));
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        const Dual1 r = h_[static_cast<std::size_t>(i)].eval_as<Dual1>(vars);
        for (Eigen::Index j = 0; j < n; ++j) J.hx(i, j) = r.partial(static_cast<std::size_t>(j));
        for (Eigen::Index j = 0; j < m; ++j) J.hu(i, j) = r.partial(n_ + static_cast<std::size_t>(j));
    }
    return J;
}

GenericSystem linear_to_generic(const LinearSystem& sys) {
    validate_linear(sys);
    const std::size_t n = sys.state_dim();
    const std::size_t m = sys.io_dim();
    const auto xs = state_vars(n, m);
    const auto us = input_vars(n, m);
    std::vector<Expr> f;
    std::vector<Expr> h;
    for (Eigen::Index i = 0; i < sys.A.rows(); ++i) {
        f.push_back(linear_combination(sys.A.row(i), xs, n, m) +
                    linear_combination(sys.B.row(i), us, n, m));
    }
    for (Eigen::Index i = 0; i < sys.D.rows(); ++i) {
        h.push_back(linear_combination(sys.C.row(i), xs, n, m) +
                    linear_combination(sys.D.row(i), us, n, m));
    }
    return GenericSystem(n, m, std::move(f), std::move(h), sys);
}

LinearSystem linear_realization(const PortHamiltonianLinear& s) {
    LinearSystem lin;
    lin.A = (s.J - s.R) * s.Q;
    lin.B = s.B;
    lin.C = s.B.transpose() * s.Q;
    lin.D = s.D;
    return lin;
}

LinearSystem linear_realization(const GradientLinear& s) {
    const Eigen::MatrixXd Ginv = linalg::checked_inverse(s.G, "G");
    LinearSystem lin;
    lin.A = -(Ginv * s.P);
    lin.B = Ginv * s.C.transpose();
    lin.C = s.C;
    lin.D = s.D;
    return lin;
}

GenericSystem to_generic(const StructuredSystem& s) {
    validate(s);
    return std::visit(
        [](const auto& v) -> GenericSystem {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LinearSystem>) {
                return linear_to_generic(v);
            } else if constexpr (std::is_same_v<T, PortHamiltonianLinear> ||
                                 std::is_same_v<T, GradientLinear>) {
                return linear_to_generic(linear_realization(v));
            } else if constexpr (std::is_same_v<T, PortHamiltonianNonlinear>) {
                const std::size_t n = static_cast<std::size_t>(v.J.rows());
                const std::size_t m = static_cast<std::size_t>(v.D.rows());
                std::vector<Expr> grad;
                for (std::size_t i = 0; i < n; ++i) grad.push_back(v.H.derivative(Variable::state(i)));
                const auto us = input_vars(n, m);
                const Eigen::MatrixXd JR = v.J - v.R;
                const Eigen::MatrixXd Bt = v.B.transpose();
                std::vector<Expr> f;
                std::vector<Expr> h;
                for (Eigen::Index i = 0; i < JR.rows(); ++i) {
                    f.push_back(linear_combination(JR.row(i), grad, n, m) +
                                linear_combination(v.B.row(i), us, n, m));
                }
                for (Eigen::Index i = 0; i < v.D.rows(); ++i) {
                    h.push_back(linear_combination(Bt.row(i), grad, n, m) +
                                linear_combination(v.D.row(i), us, n, m));
                }
                return GenericSystem(n, m, std::move(f), std::move(h));
            } else if constexpr (std::is_same_v<T, GradientNonlinear>) {
                const std::size_t n = v.V.state_dim();
                const std::size_t m = v.V.input_dim();
                const Eigen::MatrixXd Ginv = linalg::checked_inverse(v.G, "G");
                std::vector<Expr> dVdx;
                for (std::size_t i = 0; i < n; ++i) dVdx.push_back(v.V.derivative(Variable::state(i)));
                std::vector<Expr> f;
                std::vector<Expr> h;
                const Eigen::MatrixXd negGinv = -Ginv;
                for (Eigen::Index i = 0; i < negGinv.rows(); ++i) {
                    f.push_back(linear_combination(negGinv.row(i), dVdx, n, m));
                }
                for (std::size_t j = 0; j < m; ++j) h.push_back(-v.V.derivative(Variable::input(j)));
                return GenericSystem(n, m, std::move(f), std::move(h));
            } else {
                return GenericSystem(0, v.h.size(), {}, v.h);
            }
        },
        s);
}

Eigen::MatrixXd simulate_linear_exact(const LinearSystem& sys, const Eigen::VectorXd& x0,
                                      const Eigen::MatrixXd& u, double T) {
    validate_linear(sys);
    const Eigen::Index n = sys.A.rows();
    const Eigen::Index m = sys.B.cols();
    if (x0.size() != n || u.cols() != m || u.rows() < 2) {
        throw DimensionError("simulate_linear_exact: dimension mismatch");
    }
    const Eigen::Index N = u.rows() - 1;
    const double h = T / static_cast<double>(N);
    // Augmented state [x; u_k; slope] makes the piecewise-linear input autonomous.
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + 2 * m, n + 2 * m);
    M.topLeftCorner(n, n) = sys.A;
    M.block(0, n, n, m) = sys.B;
    M.block(n, n + m, m, m) = Eigen::MatrixXd::Identity(m, m);
    const Eigen::MatrixXd Phi = linalg::expm(M * h);

    Eigen::MatrixXd X(N + 1, n);
    Eigen::VectorXd x = x0;
    X.row(0) = x.transpose();
    Eigen::VectorXd z(n + 2 * m);
    for (Eigen::Index k = 0; k < N; ++k) {
        z << x, u.row(k).transpose(), (u.row(k + 1) - u.row(k)).transpose() / h;
        x = (Phi * z).head(n);
        X.row(k + 1) = x.transpose();
    }
    return X;
}

}  // namespace optload
