// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "tailrca/evaluation.hpp"
#include "tailrca/simulator.hpp"

namespace tailrca {

/// Parsed configuration bundle. One declarative JSON file carries up to four
/// blocks - workload, disturbance, engine, evaluation - all optional, all
/// falling back to the frozen defaults.
struct CliConfig {
    Scenario scenario;            // workload + optional disturbance
    EngineParams engine;
    EvaluationConfig evaluation;  // shares the engine and workload blocks
};

/// Defaults only (no file).
CliConfig default_config();

/// Parses a config document. Throws ConfigError on malformed JSON or bad
/// values; unknown keys are ignored.
CliConfig parse_config(const std::string& json_text);

CliConfig load_config(const std::filesystem::path& path);

}  // namespace tailrca
