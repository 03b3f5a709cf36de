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
#ifndef OPTLOAD_HAMILTONIAN_HPP
#define OPTLOAD_HAMILTONIAN_HPP

#include <cstddef>

#include <Eigen/Dense>

#include "optload/model.hpp"

namespace optload {

struct NewtonOptions {
    double tolerance = 1e-10;  // on the infinity norm of dH+/du - target
    std::size_t max_iterations = 50;
    std::size_t max_halvings = 30;
};

struct SigmaPlusRhs {
    Eigen::VectorXd xdot;   // dH+/dp = f
    Eigen::VectorXd pdot;   // -dH+/dx
    Eigen::VectorXd yplus;  // dH+/du
};

struct InputSolution {
    Eigen::VectorXd u;
    double residual = 0.0;  // infinity norm
    std::size_t iterations = 0;
};

/**
 * @brief Hamiltonian input-output system generated by
 * H+(x, p, u) = p^T f(x, u) + u^T h(x, u), and its inverse obtained by
 * solving y+ = dH+/du for u.
 *
 * Holds no mutable state, so one instance may be shared across threads.
 */
class HamiltonianSystem {
public:
    explicit HamiltonianSystem(GenericSystem base);

    const GenericSystem& base() const { return base_; }
    std::size_t state_dim() const { return base_.state_dim(); }
    std::size_t io_dim() const { return base_.io_dim(); }

    double hplus(const Eigen::VectorXd& x, const Eigen::VectorXd& p, const Eigen::VectorXd& u) const;

    SigmaPlusRhs sigma_plus_rhs(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                                const Eigen::VectorXd& u) const;

    /// dH+/du only (cheaper than the full right-hand side).
    Eigen::VectorXd yplus(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                          const Eigen::VectorXd& u) const;

    /// d^2 H+ / du du^T, symmetric.
    Eigen::MatrixXd partial_hessian(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                                    const Eigen::VectorXd& u) const;

    /**
     * Solves dH+/du (x, p, u) = target for u by damped Newton from `guess`.
     * Linear systems use u = (D + D^T)^{-1} (target - C x - B^T p) directly.
     * Throws SingularHessian when the Hessian condition number reaches 1e12
     * and NoConvergence when the iteration or halving budget runs out.
     */
    InputSolution invert_input(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                               const Eigen::VectorXd& target, const Eigen::VectorXd& guess,
                               const NewtonOptions& options = {}) const;

    /// H+(x, p, u*) - u*^T y+ with u* = invert_input(x, p, y+, guess).
    double htimes(const Eigen::VectorXd& x, const Eigen::VectorXd& p, const Eigen::VectorXd& yplus,
                  const Eigen::VectorXd& guess, const NewtonOptions& options = {}) const;

private:
    struct InputDerivatives {
        Eigen::VectorXd grad;
        Eigen::MatrixXd hess;
    };
    InputDerivatives input_derivatives(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                                       const Eigen::VectorXd& u) const;
    void check(const Eigen::VectorXd& x, const Eigen::VectorXd& p, const Eigen::VectorXd& u) const;

    GenericSystem base_;
    Eigen::MatrixXd sym_feedthrough_;       // D + D^T (linear systems)
    bool linear_invertible_ = false;
    Eigen::PartialPivLU<Eigen::MatrixXd> sym_feedthrough_lu_;
};

/// Linear realization of Sigma+ for a linear Sigma: states (x, p), input u,
/// output y+ = Cx + B^T p + (D + D^T) u.
LinearSystem sigma_plus_realization(const LinearSystem& sys);

}  // namespace optload

#endif  // OPTLOAD_HAMILTONIAN_HPP
