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

#include "bqc/datasets.hpp"

#include <cmath>
#include <stdexcept>

namespace bqc {

void BasGrid::validate() const {
    if (rows < 1 || cols < 1) throw std::invalid_argument("BasGrid: rows and cols must be >= 1");
    if (rows * cols > 24) throw std::invalid_argument("BasGrid: rows * cols exceeds 24 qubits");
}

void GaussianSpec::validate() const {
    if (num_qubits < 1 || num_qubits > 24) {
        throw std::invalid_argument("GaussianSpec: num_qubits out of range");
    }
    if (sigma <= 0.0) throw std::invalid_argument("GaussianSpec: sigma must be positive");
    if (mean < 0.0 || mean >= static_cast<double>(std::size_t{1} << num_qubits)) {
        throw std::invalid_argument("GaussianSpec: mean outside [0, 2^n)");
    }
}

void MixtureSpec::validate() const {
    if (components.empty()) throw std::invalid_argument("MixtureSpec: no components");
    double sum = 0.0;
    for (const MixtureComponent& c : components) {
        if (c.weight < 0.0) throw std::invalid_argument("MixtureSpec: negative weight");
        c.gaussian.validate();
        if (c.gaussian.num_qubits != components.front().gaussian.num_qubits) {
            throw std::invalid_argument("MixtureSpec: components disagree on num_qubits");
        }
        sum += c.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("MixtureSpec: weights sum to " + std::to_string(sum));
    }
}

namespace {

// Pixel (r, c) of an image index, row-major, top-left = MSB.
inline int pixel(BasisIndex image, const BasGrid& grid, int r, int c) {
    const int pos = grid.num_pixels() - 1 - (r * grid.cols + c);
    return static_cast<int>((image >> pos) & 1);
}

bool is_bar(BasisIndex image, const BasGrid& grid) {
    for (int c = 0; c < grid.cols; ++c) {
        const int head = pixel(image, grid, 0, c);
        for (int r = 1; r < grid.rows; ++r) {
            if (pixel(image, grid, r, c) != head) return false;
        }
    }
    return true;
}

bool is_stripe(BasisIndex image, const BasGrid& grid) {
    for (int r = 0; r < grid.rows; ++r) {
        const int head = pixel(image, grid, r, 0);
        for (int c = 1; c < grid.cols; ++c) {
            if (pixel(image, grid, r, c) != head) return false;
        }
    }
    return true;
}

}  // namespace

std::vector<BasisIndex> bas_patterns(const BasGrid& grid) {
    grid.validate();
    std::vector<BasisIndex> patterns;
    const BasisIndex total = BasisIndex{1} << grid.num_pixels();
    for (BasisIndex image = 0; image < total; ++image) {
        if (is_bar(image, grid) || is_stripe(image, grid)) patterns.push_back(image);
    }
    return patterns;
}

DiscreteDistribution bas_target(const BasGrid& grid) {
    const std::vector<BasisIndex> patterns = bas_patterns(grid);
    DiscreteDistribution d{
        std::vector<double>(std::size_t{1} << grid.num_pixels(), 0.0)};
    for (BasisIndex p : patterns) d.probs[p] = 1.0 / static_cast<double>(patterns.size());
    return d;
}

DiscreteDistribution discretized_gaussian(const GaussianSpec& spec) {
    spec.validate();
    const std::size_t size = std::size_t{1} << spec.num_qubits;
    DiscreteDistribution d{std::vector<double>(size, 0.0)};
    double sum = 0.0;
    for (std::size_t x = 0; x < size; ++x) {
        const double dx = static_cast<double>(x) - spec.mean;
        d.probs[x] = std::exp(-dx * dx / (2.0 * spec.sigma * spec.sigma));
        sum += d.probs[x];
    }
    for (double& p : d.probs) p /= sum;
    return d;
}

DiscreteDistribution mixture_target(const MixtureSpec& spec) {
    spec.validate();
    const std::size_t size = std::size_t{1} << spec.components.front().gaussian.num_qubits;
    DiscreteDistribution d{std::vector<double>(size, 0.0)};
    for (const MixtureComponent& c : spec.components) {
        const DiscreteDistribution g = discretized_gaussian(c.gaussian);
        for (std::size_t x = 0; x < size; ++x) d.probs[x] += c.weight * g.probs[x];
    }
    return d;
}

}  // namespace bqc
