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
#ifndef OPTLOAD_TESTS_SUPPORT_HPP
#define OPTLOAD_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "optload/model.hpp"
#include "optload/source_signal.hpp"
#include "optload/trajectory.hpp"

namespace optload::testing {

// Closed forms, all with C = R = 1, x0 = 0, T = 1 and y_S = 1 unless noted.
inline constexpr double kRcInput = 1.0 / 3.0;
inline constexpr double kRcEnergy = 1.0 / 6.0;

/// Root of c^3 + 2c - 1 = 0 by bisection: the constant extremal input of the
/// nonlinear capacitor x' = u, y = x^3 + u with y_S = 1, x0 = 0, T = 1.
inline double nonlinear_capacitor_input() {
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid * mid * mid + 2.0 * mid - 1.0 > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

/// -P for the constant input c of the nonlinear capacitor: c - c^2 - c^4/4.
inline double nonlinear_capacitor_energy(double c) { return c - c * c - std::pow(c, 4) / 4.0; }

inline GenericSystem rc_system(double C = 1.0, double R = 1.0) {
    return GenericSystem::from_strings(1, 1, {"u0"}, {"x0/C + R*u0"}, {{"C", C}, {"R", R}});
}

inline GenericSystem nonlinear_capacitor() {
    return GenericSystem::from_strings(1, 1, {"u0"}, {"x0^3 + u0"});
}

inline SourceSignal unit_source(std::size_t m = 1) { return SourceSignal::constant(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m))); }

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
    std::normal_distribution<double> d(0.0, scale);
    Eigen::MatrixXd M(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) M(i, j) = d(rng);
    }
    return M;
}

inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, Eigen::Index n, double shift = 0.5) {
    const Eigen::MatrixXd A = random_matrix(rng, n, n);
    return A * A.transpose() / static_cast<double>(n) + shift * Eigen::MatrixXd::Identity(n, n);
}

inline Eigen::MatrixXd random_skew(std::mt19937_64& rng, Eigen::Index n) {
    const Eigen::MatrixXd A = random_matrix(rng, n, n);
    return A - A.transpose();
}

inline PortHamiltonianLinear random_ph_linear(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m) {
    return {random_skew(rng, n), random_spd(rng, n, 0.1), random_spd(rng, n), random_matrix(rng, n, m),
            random_spd(rng, m)};
}

inline GradientLinear random_gradient_linear(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m) {
    // Indefinite but well-conditioned metric.
    Eigen::MatrixXd G = random_spd(rng, n);
    if (n > 1) G(0, 0) = -G(0, 0) - 1.0;
    const Eigen::MatrixXd Gs = 0.5 * (G + G.transpose());
    const Eigen::MatrixXd P = random_matrix(rng, n, n);
    const Eigen::MatrixXd D = random_matrix(rng, m, m);
    return {Gs, 0.5 * (P + P.transpose()), random_matrix(rng, m, n), 0.5 * (D + D.transpose())};
}

inline LinearSystem random_linear(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m) {
    return {random_matrix(rng, n, n, 0.7), random_matrix(rng, n, m), random_matrix(rng, m, n),
            random_matrix(rng, m, m) + 2.0 * Eigen::MatrixXd::Identity(m, m)};
}

/// Random smooth nonlinear system with n, m <= 3, written as expression strings.
inline GenericSystem random_nonlinear(std::mt19937_64& rng, std::size_t n, std::size_t m) {
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    auto num = [&] {
        std::ostringstream os;
        os.precision(6);
        os << '(' << c(rng) << ')';
        return os.str();
    };
    std::vector<std::string> f;
    std::vector<std::string> h;
    for (std::size_t i = 0; i < n; ++i) {
        std::string e = num() + "*x" + std::to_string(i);
        e += " + " + num() + "*sin(x" + std::to_string((i + 1) % n) + ")";
        e += " + " + num() + "*u" + std::to_string(i % m);
        e += " + " + num() + "*x" + std::to_string(i) + "*u" + std::to_string((i + 1) % m);
        e += " - 0.2*x" + std::to_string(i) + "^3";
        f.push_back(e);
    }
    for (std::size_t j = 0; j < m; ++j) {
        std::string e = "2*u" + std::to_string(j) + " + " + num() + "*tanh(x" + std::to_string(j % n) + ")";
        e += " + " + num() + "*x" + std::to_string((j + 1) % n) + "^2";
        e += " + 0.3*u" + std::to_string(j) + "^3";
        e += " + " + num() + "*cos(x" + std::to_string(j % n) + ")*u" + std::to_string((j + 1) % m);
        h.push_back(e);
    }
    return GenericSystem::from_strings(n, m, f, h);
}

/// Smooth deterministic grid signal: rows t_k, columns sum of two sinusoids.
inline Eigen::MatrixXd smooth_signal(std::mt19937_64& rng, const UniformGrid& grid, Eigen::Index cols,
                                     double scale = 1.0) {
    std::uniform_real_distribution<double> a(-1.0, 1.0);
    std::uniform_real_distribution<double> w(0.5, 6.0);
    Eigen::MatrixXd S(static_cast<Eigen::Index>(grid.points()), cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        const double a1 = a(rng), a2 = a(rng), w1 = w(rng), w2 = w(rng), ph = a(rng);
        for (Eigen::Index k = 0; k < S.rows(); ++k) {
            const double t = grid.t(static_cast<std::size_t>(k));
            S(k, c) = scale * (a1 * std::sin(w1 * t + ph) + a2 * std::cos(w2 * t));
        }
    }
    return S;
}

/// Channel j of a sin((1 + 0.3 j) w t + j) linearly interpolated on a fixed
/// grid of `coarse` intervals. Exact on every refinement that contains those nodes.
inline Eigen::MatrixXd coarse_linear_signal(const UniformGrid& grid, Eigen::Index cols, double a, double w,
                                            std::size_t coarse = 10) {
    const UniformGrid c{grid.T, coarse};
    Eigen::MatrixXd S(static_cast<Eigen::Index>(grid.points()), cols);
    for (Eigen::Index k = 0; k < S.rows(); ++k) {
        const double pos = grid.t(static_cast<std::size_t>(k)) / c.step();
        const std::size_t i = std::min(coarse - 1, static_cast<std::size_t>(pos));
        const double theta = pos - static_cast<double>(i);
        for (Eigen::Index j = 0; j < cols; ++j) {
            auto v = [&](double t) { return a * std::sin((1.0 + 0.3 * static_cast<double>(j)) * w * t + static_cast<double>(j)); };
            S(k, j) = (1.0 - theta) * v(c.t(i)) + theta * v(c.t(i + 1));
        }
    }
    return S;
}

/**
 * Independent linear oracle: exact response of x' = Ax + Bu to an input that
 * is linear on each grid interval, by the exponential of the block matrix
 * [[hA, hB, 0], [0, 0, I], [0, 0, 0]] acting on (x, u_k, u_{k+1} - u_k).
 */
inline Eigen::MatrixXd exact_linear_states(const LinearSystem& sys, const Eigen::VectorXd& x0,
                                           const Eigen::MatrixXd& u, double h) {
    const Eigen::Index n = sys.A.rows();
    const Eigen::Index m = sys.B.cols();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + 2 * m, n + 2 * m);
    M.topLeftCorner(n, n) = sys.A * h;
    M.block(0, n, n, m) = sys.B * h;
    M.block(n, n + m, m, m) = Eigen::MatrixXd::Identity(m, m);
    const Eigen::MatrixXd E = M.exp();
    Eigen::MatrixXd X(u.rows(), n);
    Eigen::VectorXd x = x0;
    X.row(0) = x.transpose();
    for (Eigen::Index k = 0; k + 1 < u.rows(); ++k) {
        Eigen::VectorXd z(n + 2 * m);
        z << x, u.row(k).transpose(), (u.row(k + 1) - u.row(k)).transpose();
        x = (E * z).head(n);
        X.row(k + 1) = x.transpose();
    }
    return X;
}

/// Central finite-difference Jacobian of F at z.
inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& F,
                                   const Eigen::VectorXd& z, double step = 1e-6) {
    const Eigen::VectorXd f0 = F(z);
    Eigen::MatrixXd J(f0.size(), z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        Eigen::VectorXd zp = z, zm = z;
        zp(i) += step;
        zm(i) -= step;
        J.col(i) = (F(zp) - F(zm)) / (2.0 * step);
    }
    return J;
}

/// Composite Simpson rule of a grid signal column (N even).
inline double simpson(const Eigen::VectorXd& v, double h) {
    const Eigen::Index N = v.size() - 1;
    double s = v(0) + v(N);
    for (Eigen::Index k = 1; k < N; ++k) s += (k % 2 == 1 ? 4.0 : 2.0) * v(k);
    return s * h / 3.0;
}

}  // namespace optload::testing

#endif  // OPTLOAD_TESTS_SUPPORT_HPP
