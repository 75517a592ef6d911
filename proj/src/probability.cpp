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

#include "bqc/probability.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bqc {

void RegisterSplit::validate_for(const StateVector& state) const {
    if (n < 1) throw std::invalid_argument("RegisterSplit: n must be >= 1");
    if (m < 0) throw std::invalid_argument("RegisterSplit: m must be >= 0");
    if (n + m != state.num_qubits()) {
        throw std::invalid_argument("RegisterSplit: n + m = " + std::to_string(n + m) +
                                    " does not match state with " +
                                    std::to_string(state.num_qubits()) + " qubits");
    }
}

void DiscreteDistribution::validate() const {
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw std::invalid_argument("DiscreteDistribution: negative entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("DiscreteDistribution: total " + std::to_string(sum) +
                                    " is not 1");
    }
}

DiscreteDistribution uniform_distribution(std::size_t size) {
    if (size == 0) throw std::invalid_argument("uniform_distribution: empty domain");
    return {std::vector<double>(size, 1.0 / static_cast<double>(size))};
}

DiscreteDistribution delta_distribution(std::size_t size, std::size_t index) {
    if (index >= size) throw std::out_of_range("delta_distribution: index out of range");
    DiscreteDistribution d{std::vector<double>(size, 0.0)};
    d.probs[index] = 1.0;
    return d;
}

DiscreteDistribution empirical_distribution(const ShotResult& shots, std::size_t size) {
    if (shots.total_shots <= 0) {
        throw std::invalid_argument("empirical_distribution: no finite shot total");
    }
    DiscreteDistribution d{std::vector<double>(size, 0.0)};
    for (const auto& [index, count] : shots.counts) {
        if (index >= size) throw std::out_of_range("empirical_distribution: outcome too large");
        d.probs[index] = static_cast<double>(count) / static_cast<double>(shots.total_shots);
    }
    return d;
}

double total_variation(const DiscreteDistribution& p, const DiscreteDistribution& f) {
    if (p.probs.size() != f.probs.size()) {
        throw std::invalid_argument("total_variation: support sizes differ");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < p.probs.size(); ++i) acc += std::abs(p.probs[i] - f.probs[i]);
    return acc / 2.0;
}

DiscreteDistribution joint(const StateVector& state, const RegisterSplit& split) {
    split.validate_for(state);
    return {state.probabilities()};
}

DiscreteDistribution prior_of_joint(const DiscreteDistribution& j, const RegisterSplit& split) {
    if (split.m == 0) {
        throw std::invalid_argument("prior: register has no ancilla qubits");
    }
    DiscreteDistribution d{std::vector<double>(split.latent_size(), 0.0)};
    for (std::size_t x = 0; x < split.data_size(); ++x) {
        const std::size_t base = x << split.m;
        for (std::size_t l = 0; l < split.latent_size(); ++l) d.probs[l] += j.probs[base + l];
    }
    return d;
}

DiscreteDistribution data_marginal_of_joint(const DiscreteDistribution& j,
                                            const RegisterSplit& split) {
    DiscreteDistribution d{std::vector<double>(split.data_size(), 0.0)};
    for (std::size_t x = 0; x < split.data_size(); ++x) {
        const std::size_t base = x << split.m;
        double acc = 0.0;
        for (std::size_t l = 0; l < split.latent_size(); ++l) acc += j.probs[base + l];
        d.probs[x] = acc;
    }
    return d;
}

DiscreteDistribution likelihood_of_joint(const DiscreteDistribution& j,
                                         const RegisterSplit& split,
                                         std::size_t lambda_index) {
    if (lambda_index >= split.latent_size()) {
        throw std::out_of_range("likelihood: latent index out of range");
    }
    double mass = 0.0;
    for (std::size_t x = 0; x < split.data_size(); ++x) {
        mass += j.probs[(x << split.m) + lambda_index];
    }
    if (mass <= kConditioningFloor) {
        throw std::invalid_argument("likelihood: latent " + std::to_string(lambda_index) +
                                    " has probability below the conditioning floor");
    }
    DiscreteDistribution d{std::vector<double>(split.data_size(), 0.0)};
    for (std::size_t x = 0; x < split.data_size(); ++x) {
        d.probs[x] = j.probs[(x << split.m) + lambda_index] / mass;
    }
    return d;
}

DiscreteDistribution prior(const StateVector& state, const RegisterSplit& split) {
    split.validate_for(state);
    return prior_of_joint({state.probabilities()}, split);
}

DiscreteDistribution likelihood(const StateVector& state, const RegisterSplit& split,
                                std::size_t lambda_index) {
    split.validate_for(state);
    return likelihood_of_joint({state.probabilities()}, split, lambda_index);
}

DiscreteDistribution posterior(const StateVector& state, const RegisterSplit& split,
                               std::size_t x_index) {
    split.validate_for(state);
    if (x_index >= split.data_size()) {
        throw std::out_of_range("posterior: data index out of range");
    }
    const std::vector<double> probs = state.probabilities();
    const std::size_t base = x_index << split.m;
    double evidence = 0.0;
    for (std::size_t l = 0; l < split.latent_size(); ++l) evidence += probs[base + l];
    if (evidence <= kConditioningFloor) {
        throw std::invalid_argument("posterior: outcome " + std::to_string(x_index) +
                                    " has probability below the conditioning floor");
    }
    DiscreteDistribution d{std::vector<double>(split.latent_size(), 0.0)};
    for (std::size_t l = 0; l < split.latent_size(); ++l) {
        d.probs[l] = probs[base + l] / evidence;
    }
    return d;
}

DiscreteDistribution data_marginal(const StateVector& state, const RegisterSplit& split) {
    split.validate_for(state);
    return data_marginal_of_joint({state.probabilities()}, split);
}

}  // namespace bqc
