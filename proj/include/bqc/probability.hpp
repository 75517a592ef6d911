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

#include <cstddef>
#include <vector>

#include "bqc/statevector.hpp"

namespace bqc {

/// Conditioning on events below this squared-amplitude mass is rejected.
inline constexpr double kConditioningFloor = 1e-12;

/// Partition of a register into n data qubits (indices 0..n-1, the high
/// bits of a basis index) and m ancilla qubits (indices n..n+m-1, the low
/// bits). A basis index therefore reads x * 2^m + lambda.
struct RegisterSplit {
    int n = 1;
    int m = 0;

    int num_qubits() const { return n + m; }
    std::size_t data_size() const { return std::size_t{1} << n; }
    std::size_t latent_size() const { return std::size_t{1} << m; }

    void validate_for(const StateVector& state) const;
};

/// Normalized probability vector over basis-state indices.
struct DiscreteDistribution {
    std::vector<double> probs;

    std::size_t support_size() const { return probs.size(); }
    double& operator[](std::size_t i) { return probs[i]; }
    double operator[](std::size_t i) const { return probs[i]; }

    /// Checks entries >= 0 and total within 1e-9 of 1.
    void validate() const;
};

DiscreteDistribution uniform_distribution(std::size_t size);

/// Point mass on one outcome.
DiscreteDistribution delta_distribution(std::size_t size, std::size_t index);

/// Empirical frequencies of a shot record over a domain of `size` outcomes.
DiscreteDistribution empirical_distribution(const ShotResult& shots, std::size_t size);

/// Total variation distance (1/2) sum |p_i - f_i|.
double total_variation(const DiscreteDistribution& p, const DiscreteDistribution& f);

/// P(x, lambda) over all 2^(n+m) joint outcomes, indexed x * 2^m + lambda.
DiscreteDistribution joint(const StateVector& state, const RegisterSplit& split);

/// P(lambda): marginal of the ancilla register, 2^m entries.
DiscreteDistribution prior(const StateVector& state, const RegisterSplit& split);

/// P(x | lambda = lambda_index): data distribution conditioned on a latent,
/// 2^n entries. Throws if the latent carries mass below the floor.
DiscreteDistribution likelihood(const StateVector& state, const RegisterSplit& split,
                                std::size_t lambda_index);

/// P(lambda | x = x_index): latent distribution conditioned on an observed
/// data outcome, 2^m entries.
DiscreteDistribution posterior(const StateVector& state, const RegisterSplit& split,
                               std::size_t x_index);

/// P(x): marginal of the data register, 2^n entries.
DiscreteDistribution data_marginal(const StateVector& state, const RegisterSplit& split);

// Marginals of an explicit joint table, used when the joint is empirical
// rather than read from a state.
DiscreteDistribution prior_of_joint(const DiscreteDistribution& joint,
                                    const RegisterSplit& split);
DiscreteDistribution data_marginal_of_joint(const DiscreteDistribution& joint,
                                            const RegisterSplit& split);
DiscreteDistribution likelihood_of_joint(const DiscreteDistribution& joint,
                                         const RegisterSplit& split, std::size_t lambda_index);

}  // namespace bqc
