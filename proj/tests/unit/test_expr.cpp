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
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "optload/errors.hpp"
#include "optload/expr.hpp"

namespace optload {
namespace {

double eval(const Expr& e, std::vector<double> x, std::vector<double> u) { return e.eval(x, u); }

TEST(ExprParse, PrecedenceAndAssociativity) {
    EXPECT_DOUBLE_EQ(eval(Expr::parse("1 + 2*3", 0, 1), {}, {0}), 7.0);
    EXPECT_DOUBLE_EQ(eval(Expr::parse("2^3^2", 0, 1), {}, {0}), 512.0);
    EXPECT_DOUBLE_EQ(eval(Expr::parse("-2^2", 0, 1), {}, {0}), -4.0);
    EXPECT_DOUBLE_EQ(eval(Expr::parse("8/4/2", 0, 1), {}, {0}), 1.0);
    EXPECT_DOUBLE_EQ(eval(Expr::parse("(1+2)*3", 0, 1), {}, {0}), 9.0);
}

TEST(ExprParse, VariablesConstantsAndFunctions) {
    const Expr e = Expr::parse("R*u0 + x1^3 - sin(x0)*exp(u1)", 2, 2, {{"R", 2.5}});
    const double x0 = 0.3, x1 = -1.2, u0 = 0.7, u1 = 0.1;
    EXPECT_NEAR(eval(e, {x0, x1}, {u0, u1}), 2.5 * u0 + x1 * x1 * x1 - std::sin(x0) * std::exp(u1), 1e-15);
    EXPECT_NEAR(eval(Expr::parse("pi", 0, 1), {}, {0}), std::numbers::pi, 0.0);
    EXPECT_NEAR(eval(Expr::parse("sqrt(u0) + log(u0) + tanh(u0) + cos(u0)", 0, 1), {}, {2.0}),
                std::sqrt(2.0) + std::log(2.0) + std::tanh(2.0) + std::cos(2.0), 1e-15);
}

TEST(ExprParse, Errors) {
    EXPECT_THROW(Expr::parse("x0 +", 1, 1), ParseError);
    EXPECT_THROW(Expr::parse("x2", 2, 1), ParseError);
    EXPECT_THROW(Expr::parse("u1", 1, 1), ParseError);
    EXPECT_THROW(Expr::parse("foo(x0)", 1, 1), ParseError);
    EXPECT_THROW(Expr::parse("q*x0", 1, 1), ParseError);
    EXPECT_THROW(Expr::parse("x0^u0", 1, 1), ParseError);
    EXPECT_THROW(Expr::parse("(x0", 1, 1), ParseError);
    try {
        Expr::parse("x0 + * 2", 1, 1);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 5u);
    }
}

TEST(ExprEval, DomainErrors) {
    EXPECT_THROW(eval(Expr::parse("1/x0", 1, 1), {0.0}, {0.0}), DomainError);
    EXPECT_THROW(eval(Expr::parse("log(x0)", 1, 1), {-1.0}, {0.0}), DomainError);
    EXPECT_THROW(eval(Expr::parse("sqrt(x0)", 1, 1), {-1.0}, {0.0}), DomainError);
    EXPECT_THROW(eval(Expr::parse("x0^0.5", 1, 1), {-1.0}, {0.0}), DomainError);
    EXPECT_THROW(eval(Expr::parse("x0^(-1)", 1, 1), {0.0}, {0.0}), DomainError);
    EXPECT_DOUBLE_EQ(eval(Expr::parse("x0^2", 1, 1), {-3.0}, {0.0}), 9.0);
    EXPECT_DOUBLE_EQ(eval(Expr::parse("x0^0", 1, 1), {0.0}, {0.0}), 1.0);
}

TEST(ExprPrint, RoundTripsStructurally) {
    std::mt19937_64 rng(11);
    const std::vector<std::string> sources = {
        "x0*x1 - 3*u0^2 + sin(x0)/(1 + x1^2)", "-x0^3 + (-2.5)*u0", "exp(-x0)*tanh(u0) - 1e-3",
        "R*x0^4/4 - u0*x1", "sqrt(1 + x0^2) + log(2 + cos(u0))", "x0^(-2)", "1/3*x0 - 0.1",
    };
    for (const auto& s : sources) {
        const Expr e = Expr::parse(s, 2, 1, {{"R", 0.25}});
        const Expr back = Expr::parse(e.to_string(), 2, 1);
        EXPECT_TRUE(e == back) << s << " -> " << e.to_string();
        std::uniform_real_distribution<double> d(0.5, 1.5);
        const std::vector<double> x = {d(rng), d(rng)};
        const std::vector<double> u = {d(rng)};
        EXPECT_EQ(e.eval(x, u), back.eval(x, u)) << s;
    }
}

TEST(ExprDerivatives, EvalD2MatchesFiniteDifferences) {
    const Expr e = Expr::parse("x0^2*x1 + sin(x0*u0) + exp(x1)/(2 + u0^2) + x1^4/4", 2, 1);
    const std::vector<Variable> active = {Variable::state(0), Variable::state(1), Variable::input(0)};
    const std::vector<double> x = {0.4, -0.7};
    const std::vector<double> u = {1.3};
    const Dual2 d = e.eval_d2(x, u, active);
    EXPECT_DOUBLE_EQ(d.value, e.eval(x, u));

    const double h = 1e-5;
    auto f = [&](std::vector<double> z) { return e.eval(std::vector<double>{z[0], z[1]}, std::vector<double>{z[2]}); };
    const std::vector<double> z0 = {x[0], x[1], u[0]};
    for (int i = 0; i < 3; ++i) {
        auto zp = z0, zm = z0;
        zp[i] += h;
        zm[i] -= h;
        EXPECT_NEAR(d.grad(i), (f(zp) - f(zm)) / (2 * h), 1e-8);
        for (int j = 0; j < 3; ++j) {
            auto pp = z0, pm = z0, mp = z0, mm = z0;
            pp[i] += h; pp[j] += h;
            pm[i] += h; pm[j] -= h;
            mp[i] -= h; mp[j] += h;
            mm[i] -= h; mm[j] -= h;
            EXPECT_NEAR(d.hess(i, j), (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * h * h), 1e-4);
        }
    }
    EXPECT_EQ(d.hess, d.hess.transpose());
}

TEST(ExprDerivatives, SymbolicDerivativeAgreesWithDuals) {
    const Expr e = Expr::parse("x0^3*u0 - cos(x0)*x0 + sqrt(2 + x0^2)", 1, 1);
    const Expr de = e.derivative(Variable::state(0));
    const std::vector<Variable> active = {Variable::state(0)};
    for (double x : {-1.0, 0.2, 0.9}) {
        const std::vector<double> xs = {x};
        const std::vector<double> us = {0.5};
        EXPECT_NEAR(de.eval(xs, us), e.eval_d2(xs, us, active).grad(0), 1e-13);
    }
    EXPECT_TRUE(Expr::parse("u0", 1, 1).derivative(Variable::state(0)).is_constant());
}

TEST(ExprDependencies, Queries) {
    const Expr e = Expr::parse("x1*u0 + 2", 2, 2);
    EXPECT_TRUE(e.depends_on(Variable::state(1)));
    EXPECT_FALSE(e.depends_on(Variable::state(0)));
    EXPECT_TRUE(e.depends_on_input());
    EXPECT_FALSE(e.depends_on(Variable::input(1)));
    const Expr c = Expr::parse("3*pi", 2, 2);
    EXPECT_FALSE(c.depends_on_state());
    EXPECT_FALSE(c.depends_on_input());
    EXPECT_NEAR(c.eval(std::vector<double>{0.0, 0.0}, std::vector<double>{0.0, 0.0}), 3 * M_PI, 1e-15);
}

}  // namespace
}  // namespace optload
