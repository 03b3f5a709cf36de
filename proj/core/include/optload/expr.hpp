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
#ifndef OPTLOAD_EXPR_HPP
#define OPTLOAD_EXPR_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "optload/dual.hpp"

namespace optload {

/// A state variable x_i or an input variable u_j.
struct Variable {
    enum class Kind { State, Input };
    Kind kind = Kind::State;
    std::size_t index = 0;

    static Variable state(std::size_t i) { return {Kind::State, i}; }
    static Variable input(std::size_t j) { return {Kind::Input, j}; }
    friend bool operator==(const Variable&, const Variable&) = default;
};

/// Value, gradient and symmetric Hessian with respect to a set of active variables.
struct Dual2 {
    double value = 0.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
};

using ConstantMap = std::map<std::string, double, std::less<>>;

/**
 * @brief Immutable scalar expression over x0..x{n-1} and u0..u{m-1}.
 *
 * Grammar (whitespace is insignificant):
 *
 *     expr    := term { ('+' | '-') term }
 *     term    := unary { ('*' | '/') unary }
 *     unary   := '-' unary | power
 *     power   := primary [ '^' unary ]          (right-associative)
 *     primary := number | variable | constant | func '(' expr ')' | '(' expr ')'
 *     func    := sin | cos | tanh | exp | log | sqrt
 *
 * The exponent of '^' must not reference variables; it is folded to a number at
 * parse time. Named constants are inlined. Copies share the immutable tree.
 */
class Expr {
public:
    struct Node;

    /// The constant 0 over (n, m).
    Expr(std::size_t n = 0, std::size_t m = 0);

    static Expr parse(std::string_view source, std::size_t n, std::size_t m,
                      const ConstantMap& constants = {});

    static Expr constant(double value, std::size_t n, std::size_t m);
    static Expr variable(Variable var, std::size_t n, std::size_t m);

    std::size_t state_dim() const { return n_; }
    std::size_t input_dim() const { return m_; }

    double eval(std::span<const double> x, std::span<const double> u) const;

    /// Value, gradient and Hessian with respect to `active` (all other
    /// variables held fixed). Exact up to rounding; the Hessian is symmetric.
    Dual2 eval_d2(std::span<const double> x, std::span<const double> u,
                  std::span<const Variable> active) const;

    /// Evaluates with caller-seeded scalars; `vars` is [x0..x{n-1}, u0..u{m-1}].
    /// Instantiated for double, Dual1, Dual<Dual1> and Dual<Dual<Dual1>>.
    template <class T>
    T eval_as(std::span<const T> vars) const;

    /// Symbolic partial derivative. Only literal 0/1 operands are pruned.
    Expr derivative(Variable var) const;

    bool depends_on(Variable var) const;
    bool depends_on_state() const;
    bool depends_on_input() const;
    bool is_constant() const;

    /// Fully parenthesised form that parses back to the same tree.
    std::string to_string() const;

    /// Structural equality of the trees (and dimensions).
    friend bool operator==(const Expr& a, const Expr& b);

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr operator*(double c, const Expr& e);

    const std::shared_ptr<const Node>& root() const { return root_; }

private:
    Expr(std::shared_ptr<const Node> root, std::size_t n, std::size_t m);

    std::shared_ptr<const Node> root_;
    std::size_t n_ = 0;
    std::size_t m_ = 0;
};

/// Combined dimension of a (x, u) variable vector.
std::size_t variable_slot(Variable var, std::size_t n);

}  // namespace optload

#endif  // OPTLOAD_EXPR_HPP
