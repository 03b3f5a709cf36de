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
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "optload_cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"optload: extremal inputs and optimal loads for nonlinear input-output systems"};
    app.require_subcommand(1);

    optload::cli::CliOptions opt;
    std::uint64_t seed = 0;
    std::size_t steps = 0;

    const std::pair<const char*, const char*> commands[] = {
        {"solve", "Solve for the extremal input and write trajectory CSV and summary JSON"},
        {"verify", "Run the certificate suite and write a pass/fail report"},
        {"oracle", "Minimize the discretized power functional by gradient descent"},
        {"load", "Write the optimal-load report"},
        {"simulate", "Simulate the system under an input signal CSV"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config, "Run configuration (JSON file, or a directory for batch runs)")
            ->required();
        sub->add_option("--out-dir", opt.out_dir, "Directory receiving all outputs");
        sub->add_option("--seed", seed, "Seed for random perturbations (overrides problem.seed)");
        sub->add_option("--steps", steps, "Number of RK4 steps N (overrides problem.N)");
        sub->add_flag("--full-precision", opt.full_precision, "Write CSV values with 17 significant digits");
        sub->add_option("--jobs", opt.jobs, "Parallel runs for a batch directory")->check(CLI::PositiveNumber);
        if (std::string(name) == "simulate") {
            sub->add_option("--input", opt.input, "CSV with columns t,u0..u{m-1} on a uniform grid")->required();
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : optload::cli::kExitConfig;
    }

    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--seed") > 0) opt.seed = seed;
    if (sub->count("--steps") > 0) opt.steps = steps;
    return optload::cli::run_command(sub->get_name(), opt, std::cout, std::cerr);
}
