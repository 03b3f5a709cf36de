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
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "optload/hamiltonian.hpp"
#include "optload/power.hpp"
#include "support.hpp"

namespace optload {
namespace {

const UniformGrid kUnitGrid{1.0, 1000};

Eigen::MatrixXd constant_input(const UniformGrid& g, double v, Eigen::Index m = 1) {
    return Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(g.points()), m, v);
}

GenericSystem resistor(double R) { return GenericSystem(0, 1, {}, {Expr::parse("R*u0", 0, 1, {{"R", R}})}); }

TEST(PowerFunctional, ClosedForms) {
    const GenericSystem rc = testing::rc_system();
    const auto src = testing::unit_source();
    EXPECT_EQ(power_functional(rc, src, Eigen::VectorXd::Zero(1), kUnitGrid, constant_input(kUnitGrid, 0.0)), 0.0);
    EXPECT_NEAR(power_functional(rc, src, Eigen::VectorXd::Zero(1), kUnitGrid, constant_input(kUnitGrid, 1.0 / 3.0)),
                -1.0 / 6.0, 1e-12);
    EXPECT_NEAR(power_functional(resistor(1.0), src, Eigen::VectorXd(0), kUnitGrid, constant_input(kUnitGrid, 0.5)),
                -0.25, 1e-15);
    // Linear quadratic scaling: P_{2 y_S}(2 u) = 4 P_{y_S}(u) from x0 = 0.
    std::mt19937_64 rng(3);
    const GenericSystem lin = linear_to_generic(testing::random_linear(rng, 2, 2));
    const SourceSignal s1 = SourceSignal::sinusoid(Eigen::Vector2d(1, 2), Eigen::Vector2d(1, 3), Eigen::Vector2d(0, 1));
    const SourceSignal s2 = SourceSignal::sinusoid(Eigen::Vector2d(2, 4), Eigen::Vector2d(1, 3), Eigen::Vector2d(0, 1));
    const Eigen::MatrixXd u = testing::smooth_signal(rng, kUnitGrid, 2);
    EXPECT_NEAR(power_functional(lin, s2, Eigen::VectorXd::Zero(2), kUnitGrid, 2 * u),
                4 * power_functional(lin, s1, Eigen::VectorXd::Zero(2), kUnitGrid, u), 1e-12);
}

TEST(VariationalDerivative, StaticResistorIsPointwise) {
    std::mt19937_64 rng(1);
    const UniformGrid g{1.0, 100};
    const Eigen::MatrixXd u = testing::smooth_signal(rng, g, 1);
    const Eigen::MatrixXd grad =
        variational_derivative(resistor(2.0), testing::unit_source(), Eigen::VectorXd(0), g, u);
    EXPECT_LT(max_abs((grad.array() - (4.0 * u.array() - 1.0)).matrix()), 1e-14);
}

double directional_check(const GenericSystem& sys, const SourceSignal& src, const Eigen::VectorXd& x0,
                         const UniformGrid& g, const Eigen::MatrixXd& u, const Eigen::MatrixXd& du) {
    const double eps = 1e-4;
    const double fd = (power_functional(sys, src, x0, g, u + eps * du) - power_functional(sys, src, x0, g, u - eps * du)) /
                      (2 * eps);
    const double adj = l2_inner(g, variational_derivative(sys, src, x0, g, u), du);
    return std::abs(fd - adj) / std::max(std::abs(fd), 1e-3);
}

TEST(VariationalDerivative, MatchesCentralDifferences) {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 4;
        const std::size_t m = 1 + (trial / 4) % 4;
        const GenericSystem sys = testing::random_nonlinear(rng, std::min<std::size_t>(n, 3), std::min<std::size_t>(m, 3));
        const auto mi = static_cast<Eigen::Index>(sys.io_dim());
        const SourceSignal src = SourceSignal::constant(Eigen::VectorXd::LinSpaced(mi, 0.5, 1.0));
        const Eigen::MatrixXd u = testing::smooth_signal(rng, kUnitGrid, mi, 0.5);
        const Eigen::MatrixXd du = testing::smooth_signal(rng, kUnitGrid, mi);
        EXPECT_LT(directional_check(sys, src, Eigen::VectorXd::Constant(sys.state_dim(), 0.1), kUnitGrid, u, du), 1e-5)
            << "trial " << trial;
    }
}

TEST(VariationalDerivative, VanishesAtTheExtremal) {
    ProblemSpec spec{testing::nonlinear_capacitor(), testing::unit_source(), Eigen::VectorXd::Zero(1), 1.0, 1000, {}};
    const BvpSolution sol = solve_optimal_input(spec);
    const Eigen::MatrixXd g = variational_derivative(spec.sys, spec.source, spec.x0, kUnitGrid, sol.traj.u);
    EXPECT_LT(max_abs(g), 1e-6);
}

TEST(Oracle, RcAndResistor) {
    const OracleResult rc = oracle_minimize(testing::rc_system(), testing::unit_source(), Eigen::VectorXd::Zero(1),
                                            kUnitGrid);
    EXPECT_NE(rc.status, OracleStatus::BudgetExhausted);
    EXPECT_LT(l2_norm(kUnitGrid, (rc.u.array() - 1.0 / 3.0).matrix()), 1e-3);
    EXPECT_NEAR(rc.power, -1.0 / 6.0, 1e-4);
    for (std::size_t i = 1; i < rc.history.size(); ++i) EXPECT_LT(rc.history[i], rc.history[i - 1]);

    const OracleResult r = oracle_minimize(resistor(1.0), testing::unit_source(), Eigen::VectorXd(0), kUnitGrid);
    EXPECT_EQ(r.status, OracleStatus::Converged);
    EXPECT_LT(max_abs((r.u.array() - 0.5).matrix()), 1e-6);
}

TEST(Oracle, ZeroBudgetIsFlagged) {
    OracleOptions opt;
    opt.max_iterations = 0;
    const OracleResult r =
        oracle_minimize(testing::rc_system(), testing::unit_source(), Eigen::VectorXd::Zero(1), kUnitGrid, opt);
    EXPECT_EQ(r.status, OracleStatus::BudgetExhausted);
    EXPECT_EQ(r.power, 0.0);
    EXPECT_EQ(to_string(r.status), "budget_exhausted");
}

LinearSystem siso(double a, double b, double c, double d) {
    LinearSystem s;
    s.A = Eigen::MatrixXd::Constant(1, 1, a);
    s.B = Eigen::MatrixXd::Constant(1, 1, b);
    s.C = Eigen::MatrixXd::Constant(1, 1, c);
    s.D = Eigen::MatrixXd::Constant(1, 1, d);
    return s;
}

TEST(Passivity, RcSigmaPlusVariants) {
    // RC: x' = u, y = x + R u.
    const PassivityReport rc = linear_passivity_test(sigma_plus_realization(siso(0, 1, 1, 1)));
    EXPECT_EQ(rc.certificate, PassivityCertificate::PositiveReal);
    EXPECT_EQ(rc.minimal_order, 0u);
    EXPECT_EQ(linear_passivity_test(sigma_plus_realization(siso(0, 1, 1, -1))).certificate,
              PassivityCertificate::NotPositiveReal);
    EXPECT_EQ(linear_passivity_test(sigma_plus_realization(siso(0, 1, 1, 0))).certificate,
              PassivityCertificate::NotApplicable);
}

// Independent oracle: min over a frequency sweep of lambda_min(G(jw) + G(jw)^H).
double sweep_margin(const LinearSystem& s) {
    using C = std::complex<double>;
    double worst = 1e300;
    for (int i = -400; i <= 400; ++i) {
        const double w = std::pow(10.0, i / 100.0);
        for (double sign : {1.0, -1.0}) {
            const Eigen::MatrixXcd M = C(0.0, sign * w) * Eigen::MatrixXcd::Identity(s.A.rows(), s.A.rows()) -
                                       s.A.cast<C>();
            const Eigen::MatrixXcd G = s.D.cast<C>() + s.C.cast<C>() * M.lu().solve(s.B.cast<C>());
            const Eigen::MatrixXcd Phi = G + G.adjoint();
            worst = std::min(worst, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(Phi).eigenvalues().minCoeff());
        }
    }
    const Eigen::MatrixXd R = s.D + s.D.transpose();
    return std::min(worst, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(R).eigenvalues().minCoeff());
}

TEST(Passivity, AgreesWithFrequencySweep) {
    // d - 1/(s+1): positive real iff d > 1.
    EXPECT_EQ(linear_passivity_test(siso(-1, 1, -1, 0.75)).certificate, PassivityCertificate::NotPositiveReal);
    EXPECT_EQ(linear_passivity_test(siso(-1, 1, -1, 1.25)).certificate, PassivityCertificate::PositiveReal);
    EXPECT_GT(sweep_margin(siso(-1, 1, -1, 1.25)), 0.0);
    EXPECT_LT(sweep_margin(siso(-1, 1, -1, 0.75)), 0.0);

    std::mt19937_64 rng(101);
    int decided = 0;
    for (int trial = 0; trial < 60; ++trial) {
        LinearSystem s = testing::random_linear(rng, 3, 2);
        s.A -= (Eigen::EigenSolver<Eigen::MatrixXd>(s.A).eigenvalues().real().maxCoeff() + 0.5) *
               Eigen::MatrixXd::Identity(3, 3);
        s.D = 0.5 * (s.D + s.D.transpose()) + Eigen::MatrixXd::Identity(2, 2) * (trial % 3);
        const double margin = sweep_margin(s);
        if (std::abs(margin) < 1e-3) continue;
        ++decided;
        const bool pr = linear_passivity_test(s).certificate == PassivityCertificate::PositiveReal;
        EXPECT_EQ(pr, margin > 0.0) << "trial " << trial << " margin " << margin;
    }
    EXPECT_GT(decided, 20);
}

TEST(Perturbation, RcMinimality) {
    const ProblemSpec spec{testing::rc_system(), testing::unit_source(), Eigen::VectorXd::Zero(1), 1.0, 1000, {}};
    const BvpSolution sol = solve_optimal_input(spec);
    PerturbationOptions opt;
    opt.trials = 100;
    opt.magnitude = 0.1;
    opt.seed = 2024;
    const OptimalityReport rep = perturbation_test(spec.sys, spec.source, spec.x0, kUnitGrid, sol.traj.u, opt);
    EXPECT_EQ(rep.trials, 100u);
    EXPECT_GE(rep.perturbation_margin, -1e-8);
    EXPECT_GT(rep.perturbation_margin, 0.0);

    opt.include_zero = true;
    const OptimalityReport with_zero = perturbation_test(spec.sys, spec.source, spec.x0, kUnitGrid, sol.traj.u, opt);
    EXPECT_EQ(with_zero.margins.front(), 0.0);

    const OptimalityReport again = perturbation_test(spec.sys, spec.source, spec.x0, kUnitGrid, sol.traj.u,
                                                     {100, 0.1, 2024, false});
    EXPECT_EQ(again.margins, rep.margins);

    const OptimalityReport bad = perturbation_test(spec.sys, spec.source, spec.x0, kUnitGrid,
                                                   Eigen::MatrixXd(sol.traj.u.array() + 0.1), opt);
    EXPECT_LT(bad.perturbation_margin, -1e-4);

    const OptimalityReport full = certify(spec, sol, opt);
    EXPECT_EQ(full.passivity.certificate, PassivityCertificate::NotApplicable);
    EXPECT_TRUE(full.empirical_only);
    EXPECT_LE(full.first_order_residual, 1e-10);
}

TEST(Perturbation, SignalsAreBoundedAndSeeded) {
    for (std::size_t trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd du = random_perturbation(kUnitGrid, 2, 0.1, 7, trial);
        EXPECT_LE(max_abs(du), 0.1 + 1e-15);
        EXPECT_GT(max_abs(du), 0.0);
        EXPECT_EQ(du, random_perturbation(kUnitGrid, 2, 0.1, 7, trial));
    }
    EXPECT_NE(random_perturbation(kUnitGrid, 1, 0.1, 7, 0), random_perturbation(kUnitGrid, 1, 0.1, 8, 0));
}

}  // namespace
}  // namespace optload
