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
#ifndef OPTLOAD_SOURCE_SIGNAL_HPP
#define OPTLOAD_SOURCE_SIGNAL_HPP

#include <cstddef>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace optload {

/**
 * @brief Source signal y_S : [0, T] -> R^m, evaluated analytically at any time.
 *
 * Either a constant, per-channel sinusoids a*sin(w*t + phi), a piecewise-linear
 * interpolation of knots, or a sum of such signals.
 */
class SourceSignal {
public:
    struct Constant {
        Eigen::VectorXd value;
    };
    struct Sinusoid {
        Eigen::VectorXd amplitude;
        Eigen::VectorXd omega;
        Eigen::VectorXd phase;
    };
    struct Knot {
        double t;
        Eigen::VectorXd value;
    };
    struct PiecewiseLinear {
        std::vector<Knot> knots;
    };
    struct Sum {
        std::vector<SourceSignal> terms;
    };

    static SourceSignal constant(Eigen::VectorXd value);
    static SourceSignal sinusoid(Eigen::VectorXd amplitude, Eigen::VectorXd omega,
                                 Eigen::VectorXd phase);
    static SourceSignal piecewise_linear(std::vector<Knot> knots);
    static SourceSignal sum(std::vector<SourceSignal> terms);

    std::size_t dim() const { return dim_; }
    Eigen::VectorXd operator()(double t) const;

    /// Throws InvalidArgument unless the signal is defined on all of [0, T].
    void check_covers(double T) const;

    /// Samples at the N+1 points of the uniform grid over [0, T]; rows are times.
    Eigen::MatrixXd sample(double T, std::size_t N) const;

    const auto& repr() const { return repr_; }

private:
    using Repr = std::variant<Constant, Sinusoid, PiecewiseLinear, Sum>;
    SourceSignal(Repr repr, std::size_t dim) : repr_(std::move(repr)), dim_(dim) {}

    Repr repr_;
    std::size_t dim_ = 0;
};

}  // namespace optload

#endif  // OPTLOAD_SOURCE_SIGNAL_HPP
