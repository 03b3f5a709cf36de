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
#ifndef OPTLOAD_CLI_CONFIG_HPP
#define OPTLOAD_CLI_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "optload/errors.hpp"
#include "optload/model.hpp"
#include "optload/power.hpp"
#include "optload/solver.hpp"
#include "optload/source_signal.hpp"

namespace optload::cli {

/// Schema violation; the message starts with the JSON path of the offending field.
class ConfigError : public InvalidArgument {
public:
    ConfigError(const std::string& path, const std::string& message)
        : InvalidArgument(path + ": " + message), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct OutputPaths {
    std::string trajectory = "trajectory.csv";
    std::string summary = "summary.json";
    std::string verify_report = "verify.json";
    std::string oracle_trajectory = "oracle.csv";
    std::string oracle_summary = "oracle.json";
    std::string load_report = "load.json";
    std::string simulation = "simulation.csv";
    std::string simulation_summary = "simulation.json";
};

struct RunConfig {
    std::string name;
    GenericSystem system;
    std::optional<StructuredSystem> structured;  // absent for "generic"
    SourceSignal source;
    Eigen::VectorXd x0;
    double T = 1.0;
    std::size_t N = 1000;
    std::uint64_t seed = 0;
    SolverOptions solver;
    PerturbationOptions verify;
    OracleOptions oracle;
    OutputPaths outputs;

    ProblemSpec problem() const { return {system, source, x0, T, N, solver}; }
};

/**
 * Builds a run configuration from its JSON document.
 *
 * Top-level blocks: "system" (required), "source" (required), "problem"
 * (required), "verify", "oracle", "outputs". Throws ConfigError naming the
 * field path, or the expression/dimension errors of the core library.
 */
RunConfig parse_config(const nlohmann::json& doc, const std::string& name = "run");

RunConfig load_config(const std::filesystem::path& file);

}  // namespace optload::cli

#endif  // OPTLOAD_CLI_CONFIG_HPP
