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

#include "bqc/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace bqc {

namespace {

constexpr double kUnitaryTol = 1e-10;

bool is_unitary_2x2(const Gate2x2& g) {
    // Columns orthonormal: U^dag U = I.
    const double c0 = std::norm(g[0]) + std::norm(g[2]);
    const double c1 = std::norm(g[1]) + std::norm(g[3]);
    const Complex dot = std::conj(g[0]) * g[1] + std::conj(g[2]) * g[3];
    return std::abs(c0 - 1.0) <= kUnitaryTol && std::abs(c1 - 1.0) <= kUnitaryTol &&
           std::abs(dot) <= kUnitaryTol;
}

// Inserts zero bits at the given positions (ascending) to expand a compact
// loop counter into a full basis index with room for the fixed bits.
inline std::uint64_t expand_index(std::uint64_t k, const std::vector<int>& positions) {
    for (int p : positions) {
        const std::uint64_t low = k & ((std::uint64_t{1} << p) - 1);
        k = ((k >> p) << (p + 1)) | low;
    }
    return k;
}

}  // namespace

Gate2x2 gate_rx(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {Complex{c, 0}, Complex{0, -s}, Complex{0, -s}, Complex{c, 0}};
}

Gate2x2 gate_ry(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {Complex{c, 0}, Complex{-s, 0}, Complex{s, 0}, Complex{c, 0}};
}

Gate2x2 gate_rz(double theta) {
    return {std::polar(1.0, -theta / 2.0), Complex{0, 0}, Complex{0, 0},
            std::polar(1.0, theta / 2.0)};
}

Gate2x2 gate_x() {
    return {Complex{0, 0}, Complex{1, 0}, Complex{1, 0}, Complex{0, 0}};
}

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > 24) {
        throw std::invalid_argument("StateVector: num_qubits must be in [1, 24], got " +
                                    std::to_string(num_qubits));
    }
    amps_.assign(std::size_t{1} << num_qubits, Complex{0, 0});
    amps_[0] = Complex{1, 0};
}

void StateVector::apply_single(const Gate2x2& gate, int qubit) {
    apply_controlled(gate, {}, qubit);
}

void StateVector::apply_controlled(const Gate2x2& gate, const std::vector<ControlBit>& controls,
                                   int target) {
    if (target < 0 || target >= num_qubits_) {
        throw std::out_of_range("apply_controlled: target qubit " + std::to_string(target) +
                                " out of range");
    }
    if (!is_unitary_2x2(gate)) {
        throw std::invalid_argument("apply_controlled: matrix is not unitary within 1e-10");
    }

    // Qubit q owns bit position num_qubits-1-q (qubit 0 is the MSB).
    const int target_pos = num_qubits_ - 1 - target;
    const std::uint64_t target_mask = std::uint64_t{1} << target_pos;

    std::uint64_t ctrl_value = 0;
    std::vector<int> fixed_positions{target_pos};
    for (const ControlBit& c : controls) {
        if (c.qubit < 0 || c.qubit >= num_qubits_) {
            throw std::out_of_range("apply_controlled: control qubit " +
                                    std::to_string(c.qubit) + " out of range");
        }
        if (c.qubit == target) {
            throw std::invalid_argument("apply_controlled: control overlaps target qubit " +
                                        std::to_string(target));
        }
        if (c.bit != 0 && c.bit != 1) {
            throw std::invalid_argument("apply_controlled: control bit must be 0 or 1");
        }
        const int pos = num_qubits_ - 1 - c.qubit;
        for (std::size_t i = 1; i < fixed_positions.size(); ++i) {
            if (fixed_positions[i] == pos) {
                throw std::invalid_argument("apply_controlled: duplicate control qubit " +
                                            std::to_string(c.qubit));
            }
        }
        fixed_positions.push_back(pos);
        if (c.bit == 1) ctrl_value |= std::uint64_t{1} << pos;
    }
    std::sort(fixed_positions.begin(), fixed_positions.end());

    const Complex g00 = gate[0], g01 = gate[1], g10 = gate[2], g11 = gate[3];
    const std::uint64_t pairs = dim() >> fixed_positions.size();
    for (std::uint64_t k = 0; k < pairs; ++k) {
        const std::uint64_t i0 = expand_index(k, fixed_positions) | ctrl_value;
        const std::uint64_t i1 = i0 | target_mask;
        const Complex a0 = amps_[i0];
        const Complex a1 = amps_[i1];
        amps_[i0] = g00 * a0 + g01 * a1;
        amps_[i1] = g10 * a0 + g11 * a1;
    }
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
    return p;
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const Complex& a : amps_) s += std::norm(a);
    return s;
}

ShotResult StateVector::sample(std::uint64_t shots, std::uint64_t seed) const {
    if (shots == 0) {
        throw std::invalid_argument("sample: shots must be >= 1");
    }
    std::vector<double> cdf(amps_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        acc += std::norm(amps_[i]);
        cdf[i] = acc;
    }

    std::mt19937_64 rng(seed);
    ShotResult result;
    result.total_shots = static_cast<std::int64_t>(shots);
    for (std::uint64_t s = 0; s < shots; ++s) {
        // 53-bit uniform in [0, 1); avoids std::uniform_real_distribution,
        // whose output is implementation defined.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t idx = std::min<std::size_t>(
            static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
        ++result.counts[idx];
    }
    return result;
}

StateVector init_zero(int num_qubits) { return StateVector(num_qubits); }

}  // namespace bqc
