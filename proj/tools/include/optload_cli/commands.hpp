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
#ifndef OPTLOAD_CLI_COMMANDS_HPP
#define OPTLOAD_CLI_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "optload_cli/config.hpp"

namespace optload::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitChecksFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitIo = 4;

struct CliOptions {
    std::filesystem::path config;  // a file, or a directory of *.json for batch runs
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> steps;
    bool full_precision = false;
    std::size_t jobs = 1;
    std::filesystem::path input;  // input signal CSV for `simulate`
};

int exit_code(ErrorCategory category);

/// Runs one subcommand for a single loaded config. Errors propagate as exceptions.
int run_solve(const RunConfig& cfg, const CliOptions& opt, std::ostream& log);
int run_verify(const RunConfig& cfg, const CliOptions& opt, std::ostream& log);
int run_oracle(const RunConfig& cfg, const CliOptions& opt, std::ostream& log);
int run_load(const RunConfig& cfg, const CliOptions& opt, std::ostream& log);
int run_simulate(const RunConfig& cfg, const CliOptions& opt, std::ostream& log);

/**
 * Entry point behind the executable: loads the config (or every config of a
 * batch directory, each into its own output subdirectory), applies the flag
 * overrides and maps exceptions onto exit codes. Failures are reported on
 * `err` as one JSON object per line.
 */
int run_command(const std::string& command, const CliOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace optload::cli

#endif  // OPTLOAD_CLI_COMMANDS_HPP
