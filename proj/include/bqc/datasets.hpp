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

#include <vector>

#include "bqc/probability.hpp"
#include "bqc/statevector.hpp"

namespace bqc {

/// Bars-and-stripes image shape. Pixels map to qubits row-major with the
/// top-left pixel as the most significant bit of the pattern index.
struct BasGrid {
    int rows = 1;
    int cols = 1;

    int num_pixels() const { return rows * cols; }
    void validate() const;
};

/// One Gaussian over the integer outcomes of an n-qubit register; mean and
/// sigma are in basis-index units.
struct GaussianSpec {
    double mean = 0.0;
    double sigma = 1.0;
    int num_qubits = 1;

    void validate() const;
};

struct MixtureComponent {
    double weight = 1.0;
    GaussianSpec gaussian;
};

struct MixtureSpec {
    std::vector<MixtureComponent> components;

    void validate() const;
};

/// Sorted indices of all images whose columns are each constant (bars) or
/// whose rows are each constant (stripes); 2^rows + 2^cols - 2 of them.
std::vector<BasisIndex> bas_patterns(const BasGrid& grid);

/// Uniform distribution over the BAS patterns, zero elsewhere.
DiscreteDistribution bas_target(const BasGrid& grid);

/// exp(-(x - mean)^2 / (2 sigma^2)) truncated to [0, 2^n - 1], renormalized.
DiscreteDistribution discretized_gaussian(const GaussianSpec& spec);

/// Weighted sum of discretized components; weights must sum to 1.
DiscreteDistribution mixture_target(const MixtureSpec& spec);

}  // namespace bqc
