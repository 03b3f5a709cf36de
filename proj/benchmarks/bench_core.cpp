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
#include <benchmark/benchmark.h>

#include "optload/expr.hpp"
#include "optload/hamiltonian.hpp"
#include "optload/solver.hpp"

namespace {

using namespace optload;

void BM_ExprEval(benchmark::State& state) {
    const Expr e = Expr::parse("0.3*x0 - sin(x1)*u0 + x0^3/3 - tanh(u1)", 2, 2);
    const double x[] = {0.4, -0.2};
    const double u[] = {0.7, 0.1};
    for (auto _ : state) benchmark::DoNotOptimize(e.eval(x, u));
}
BENCHMARK(BM_ExprEval);

ProblemSpec capacitor(std::size_t N) {
    return {GenericSystem::from_strings(1, 1, {"u0"}, {"x0^3 + u0"}),
            SourceSignal::constant(Eigen::VectorXd::Ones(1)), Eigen::VectorXd::Zero(1), 1.0, N, {}};
}

void BM_SigmaTimes(benchmark::State& state) {
    const ProblemSpec spec = capacitor(static_cast<std::size_t>(state.range(0)));
    const HamiltonianSystem hs(spec.sys);
    for (auto _ : state) benchmark::DoNotOptimize(integrate_sigma_times(hs, spec, Eigen::VectorXd::Constant(1, 0.1)));
}
BENCHMARK(BM_SigmaTimes)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_SolveRc(benchmark::State& state) {
    const ProblemSpec spec{GenericSystem::from_strings(1, 1, {"u0"}, {"x0 + u0"}),
                           SourceSignal::constant(Eigen::VectorXd::Ones(1)), Eigen::VectorXd::Zero(1), 1.0,
                           static_cast<std::size_t>(state.range(0)), {}};
    for (auto _ : state) benchmark::DoNotOptimize(solve_optimal_input(spec));
}
BENCHMARK(BM_SolveRc)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SolveCapacitor(benchmark::State& state) {
    const ProblemSpec spec = capacitor(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_optimal_input(spec));
}
BENCHMARK(BM_SolveCapacitor)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
