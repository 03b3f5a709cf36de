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
#ifndef OPTLOAD_MODEL_HPP
#define OPTLOAD_MODEL_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "optload/expr.hpp"

namespace optload {

/// x' = Ax + Bu, y = Cx + Du with square input/output (m inputs, m outputs).
struct LinearSystem {
    Eigen::MatrixXd A, B, C, D;

    std::size_t state_dim() const { return static_cast<std::size_t>(A.rows()); }
    std::size_t io_dim() const { return static_cast<std::size_t>(D.rows()); }
};

/// x' = (J - R) Q x + B u, y = B^T Q x + D u.
struct PortHamiltonianLinear {
    Eigen::MatrixXd J, R, Q, B, D;
};

/// G x' = -P x + C^T u, y = C x + D u.
struct GradientLinear {
    Eigen::MatrixXd G, P, C, D;
};

/// x' = (J - R) dH/dx + B u, y = B^T dH/dx + D u with constant structure matrices.
struct PortHamiltonianNonlinear {
    Eigen::MatrixXd J, R, B, D;
    Expr H;  // over (n, m), must not depend on u
};

/// G x' = -dV/dx, y = -dV/du with a constant metric G.
struct GradientNonlinear {
    Eigen::MatrixXd G;
    Expr V;  // over (n, m)
};

/// y = h(u), no state.
struct StaticNonlinearity {
    std::vector<Expr> h;  // each over (0, m)
};

using StructuredSystem = std::variant<LinearSystem, PortHamiltonianLinear, GradientLinear,
                                      PortHamiltonianNonlinear, GradientNonlinear,
                                      StaticNonlinearity>;

/// Name of the structured class ("linear", "port_hamiltonian_linear", ...).
std::string class_name(const StructuredSystem& s);

/// Throws InvalidArgument / DimensionError when a structural invariant fails:
/// skew J, symmetric PSD R and D for port-Hamiltonian forms, symmetric Q,
/// symmetric well-conditioned G, symmetric P and D for gradient forms.
void validate(const StructuredSystem& s);

struct SystemEvaluation {
    Eigen::VectorXd xdot;
    Eigen::VectorXd y;
};

struct Jacobians {
    Eigen::MatrixXd fx;  // n x n
    Eigen::MatrixXd fu;  // n x m
    Eigen::MatrixXd hx;  // m x n
    Eigen::MatrixXd hu;  // m x m
};

/**
 * @brief The general input-state-output system x' = f(x, u), y = h(x, u).
 *
 * Systems lowered from a linear structured form keep their (A, B, C, D)
 * realization so callers can take closed-form shortcuts.
 */
class GenericSystem {
public:
    GenericSystem(std::size_t n, std::size_t m, std::vector<Expr> f, std::vector<Expr> h,
                  std::optional<LinearSystem> linear = std::nullopt);

    static GenericSystem from_strings(std::size_t n, std::size_t m,
                                      const std::vector<std::string>& f,
                                      const std::vector<std::string>& h,
                                      const ConstantMap& constants = {});

    std::size_t state_dim() const { return n_; }
    std::size_t io_dim() const { return m_; }
    const std::vector<Expr>& f() const { return f_; }
    const std::vector<Expr>& h() const { return h_; }
    const std::optional<LinearSystem>& linear() const { return linear_; }

    SystemEvaluation rhs(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;
    Eigen::VectorXd f_value(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;
    Eigen::VectorXd h_value(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;
    Jacobians jacobians(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;

    void check_point(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;

private:
    std::size_t n_;
    std::size_t m_;
    std::vector<Expr> f_;
    std::vector<Expr> h_;
    std::optional<LinearSystem> linear_;
};

/// Lowers any structured class to explicit (f, h) expressions.
GenericSystem to_generic(const StructuredSystem& s);

/// Builds f = Ax + Bu, h = Cx + Du expressions.
GenericSystem linear_to_generic(const LinearSystem& sys);

/// Realization (A, B, C, D) of the linear structured classes.
LinearSystem linear_realization(const PortHamiltonianLinear& s);
LinearSystem linear_realization(const GradientLinear& s);

/// Exact discretization of a linear system driven by a piecewise-linear input
/// sampled on a uniform grid of `steps` intervals over [0, T]. Returns the state
/// at the N+1 grid points (rows).
Eigen::MatrixXd simulate_linear_exact(const LinearSystem& sys, const Eigen::VectorXd& x0,
                                      const Eigen::MatrixXd& u, double T);

}  // namespace optload

#endif  // OPTLOAD_MODEL_HPP
