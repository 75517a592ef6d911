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

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bqc/circuit.hpp"
#include "bqc/loss.hpp"
#include "bqc/probability.hpp"

namespace bqc {

/// Raised when a loss or gradient turns non-finite.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class TrainMode { LearnTheta, LearnGamma };
enum class OptimizerKind { Sgd, Adam };

struct TrainConfig {
    TrainMode mode = TrainMode::LearnTheta;
    int max_iters = 3000;
    double tolerance = 1e-5;
    double learning_rate = 0.1;
    OptimizerKind optimizer = OptimizerKind::Adam;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    /// kExactShots reads probabilities directly ("infinite measurements");
    /// a positive count samples fresh shots every evaluation.
    std::int64_t shots = kExactShots;
    std::uint64_t seed = 0;
    KernelSpec kernel;
    /// Initial angles are uniform in [-init_scale, init_scale] radians.
    double init_scale = 0.1;
    /// Keep the incoming unfrozen values instead of drawing a random init.
    bool warm_start = false;

    void validate() const;
};

struct TrainReport {
    std::vector<double> loss_history;
    ParameterSet final_params;
    DiscreteDistribution final_data_marginal;
    DiscreteDistribution final_prior;  // empty when the register has no ancillas
    std::map<std::string, double> metrics;
    bool converged = false;
};

/// Deterministic seed derivation (splitmix64 over the mixed words); used for
/// per-iteration and per-shifted-circuit sampling so shot-mode runs are
/// reproducible.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

/// Gradient-descent loop over the unfrozen parameter vector. Stops when the
/// loss drops to config.tolerance or after max_iters. The frozen vector is
/// returned bit-identical. When component_targets is non-empty the
/// conditional per-latent loss drives the gradient (the BAS joint-target
/// mode) while `target` still defines the reported metrics.
///
/// In exact mode the parameter-shift gradient is validated against central
/// finite differences once at the starting point; slots that disagree by
/// more than 1e-6 fall back to finite differences for the whole run, and
/// metrics["fd_fallback_slots"] records how many did.
TrainReport train(const Circuit& circuit, const ParameterSet& params,
                  const DiscreteDistribution& target, const TrainConfig& config,
                  const RegisterSplit& split,
                  const std::vector<DiscreteDistribution>& component_targets = {});

struct PretrainResult {
    ParameterSet params;  // theta filled and frozen, gamma empty
    std::vector<double> component_tv;
};

/// Fits the likelihood blocks one latent at a time: the ancilla register is
/// clamped to |lambda_i> with X gates and theta is trained against
/// component_targets[i]. With the PerLatentState style the slot groups are
/// disjoint, so passes do not interfere.
PretrainResult pretrain_likelihood(const AnsatzLayout& layout,
                                   const std::vector<DiscreteDistribution>& component_targets,
                                   const TrainConfig& config);

/// Metrics of a bound circuit against a target: valid_mass (probability on
/// the target's support), total_variation, prior entries prior_<i>, and in
/// shot mode their empirical counterparts.
std::map<std::string, double> evaluate(const Circuit& circuit, const ParameterSet& params,
                                       const RegisterSplit& split,
                                       const DiscreteDistribution& target, std::int64_t shots,
                                       std::uint64_t seed);

}  // namespace bqc
