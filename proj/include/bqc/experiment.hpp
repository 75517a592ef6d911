// Copyright 2026 The bqcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "bqc/circuit.hpp"
#include "bqc/datasets.hpp"
#include "bqc/trainer.hpp"

namespace bqc {

/// Invalid or missing configuration; maps to exit code 2 in the CLI.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { BasGenerate, LearnPrior, QcbmBaseline };

std::string to_string(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::BasGenerate;
    AnsatzLayout layout;
    std::optional<BasGrid> grid;       // BAS_GENERATE, QCBM_BASELINE
    std::optional<MixtureSpec> mixture;  // LEARN_PRIOR
    TrainConfig train;
    TrainConfig pretrain;  // LEARN_PRIOR likelihood fit; always exact-mode
    std::string output_dir;
};

/// Parses and validates a config document. Unknown keys and missing
/// required keys are reported by name as config_error.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Full round-trippable echo of the config with every default filled in.
std::string resolved_config_json(const ExperimentConfig& config);

struct RunArtifacts {
    std::filesystem::path report_file;
    std::filesystem::path distribution_csv;
    std::filesystem::path target_csv;
    std::filesystem::path loss_history_csv;
    std::filesystem::path resolved_config_file;
    std::filesystem::path model_file;
    TrainReport report;
};

/// Builds the configured experiment (circuit, targets, parameter freeze),
/// trains it, and writes all artifacts under config.output_dir.
RunArtifacts run_experiment(const ExperimentConfig& config);

/// Formats a floating value with 16 significant digits for CSV output.
std::string csv_double(double value);

}  // namespace bqc
