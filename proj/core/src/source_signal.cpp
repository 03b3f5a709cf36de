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
#include "optload/source_signal.hpp"

#include <cmath>
#include <string>

#include "optload/errors.hpp"
#include "optload/trajectory.hpp"

namespace optload {

namespace {
constexpr double kKnotSlack = 1e-12;
}

SourceSignal SourceSignal::constant(Eigen::VectorXd value) {
    if (value.size() == 0) throw DimensionError("constant source needs m >= 1 channels");
    const auto m = static_cast<std::size_t>(value.size());
    return SourceSignal(Constant{std::move(value)}, m);
}

SourceSignal SourceSignal::sinusoid(Eigen::VectorXd amplitude, Eigen::VectorXd omega,
                                    Eigen::VectorXd phase) {
    if (amplitude.size() == 0 || omega.size() != amplitude.size() ||
        phase.size() != amplitude.size()) {
        throw DimensionError("sinusoid amplitude, omega and phase must have equal length m >= 1");
    }
    const auto m = static_cast<std::size_t>(amplitude.size());
    return SourceSignal(Sinusoid{std::move(amplitude), std::move(omega), std::move(phase)}, m);
}

SourceSignal SourceSignal::piecewise_linear(std::vector<Knot> knots) {
    if (knots.empty()) throw InvalidArgument("piecewise-linear source needs at least one knot");
    const auto m = knots.front().value.size();
    if (m == 0) throw DimensionError("piecewise-linear source needs m >= 1 channels");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (knots[i].value.size() != m) throw DimensionError("knot values must have equal length");
        if (i > 0 && !(knots[i].t > knots[i - 1].t)) {
            throw InvalidArgument("knot times must be strictly increasing");
        }
    }
    return SourceSignal(PiecewiseLinear{std::move(knots)}, static_cast<std::size_t>(m));
}

SourceSignal SourceSignal::sum(std::vector<SourceSignal> terms) {
    if (terms.empty()) throw InvalidArgument("sum source needs at least one term");
    const std::size_t m = terms.front().dim();
    for (const auto& t : terms) {
        if (t.dim() != m) throw DimensionError("summed sources must have equal dimension");
    }
    return SourceSignal(Sum{std::move(terms)}, m);
}

Eigen::VectorXd SourceSignal::operator()(double t) const {
    return std::visit(
        [&](const auto& v) -> Eigen::VectorXd {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return v.value;
            } else if constexpr (std::is_same_v<T, Sinusoid>) {
                Eigen::VectorXd out(v.amplitude.size());
                for (Eigen::Index i = 0; i < out.size(); ++i) {
                    out(i) = v.amplitude(i) * std::sin(v.omega(i) * t + v.phase(i));
                }
                return out;
            } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                const auto& k = v.knots;
                if (t < k.front().t - kKnotSlack || t > k.back().t + kKnotSlack) {
                    throw InvalidArgument("piecewise-linear source evaluated at t=" +
                                          std::to_string(t) + " outside its knots");
                }
                if (k.size() == 1 || t <= k.front().t) return k.front().value;
                if (t >= k.back().t) return k.back().value;
                std::size_t i = 1;
                while (k[i].t < t) ++i;
                const double theta = (t - k[i - 1].t) / (k[i].t - k[i - 1].t);
                return (1.0 - theta) * k[i - 1].value + theta * k[i].value;
            } else {
                Eigen::VectorXd out = v.terms.front()(t);
                for (std::size_t i = 1; i < v.terms.size(); ++i) out += v.terms[i](t);
                return out;
            }
        },
        repr_);
}

void SourceSignal::check_covers(double T) const {
    std::visit(
        [&](const auto& v) {
            using T_ = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T_, PiecewiseLinear>) {
                if (v.knots.front().t > kKnotSlack || v.knots.back().t < T - kKnotSlack) {
                    throw InvalidArgument("piecewise-linear source knots must cover [0, T]");
                }
            } else if constexpr (std::is_same_v<T_, Sum>) {
                for (const auto& term : v.terms) term.check_covers(T);
            }
        },
        repr_);
}

Eigen::MatrixXd SourceSignal::sample(double T, std::size_t N) const {
    const UniformGrid grid{T, N};
    Eigen::MatrixXd out(static_cast<Eigen::Index>(N + 1), static_cast<Eigen::Index>(dim_));
    for (std::size_t k = 0; k <= N; ++k) {
        out.row(static_cast<Eigen::Index>(k)) = (*this)(grid.t(k)).transpose();
    }
    return out;
}

}  // namespace optload
