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

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace bqc {

using Complex = std::complex<double>;

/// Integer label of a computational basis state. Qubit 0 is the most
/// significant bit, so a register |b0 b1 ... b_{N-1}> reads as the binary
/// number b0 b1 ... b_{N-1}.
using BasisIndex = std::uint64_t;

/// Row-major 2x2 complex matrix: {m00, m01, m10, m11}.
using Gate2x2 = std::array<Complex, 4>;

/// One (qubit, required bit) entry of a control specification.
struct ControlBit {
    int qubit = 0;
    int bit = 1;
};

Gate2x2 gate_rx(double theta);
Gate2x2 gate_ry(double theta);
Gate2x2 gate_rz(double theta);
Gate2x2 gate_x();

/// Shot count sentinel for "read probabilities exactly instead of sampling".
inline constexpr std::int64_t kExactShots = -1;

/// Measurement record: outcome index -> count.
struct ShotResult {
    std::map<BasisIndex, std::uint64_t> counts;
    std::int64_t total_shots = kExactShots;
};

/// Dense state vector over num_qubits qubits, 2^num_qubits amplitudes.
/// Gate application is in place via stride iteration over the amplitude
/// array; multi-controlled gates enumerate only the amplitudes whose
/// control bits match.
class StateVector {
public:
    /// Prepares |0...0>. num_qubits must lie in [1, 24].
    explicit StateVector(int num_qubits);

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }

    const std::vector<Complex>& amplitudes() const { return amps_; }
    std::vector<Complex>& amplitudes() { return amps_; }

    /// Applies a 2x2 unitary to one qubit. Throws std::invalid_argument if
    /// the matrix is not unitary within 1e-10, std::out_of_range for a bad
    /// qubit index.
    void apply_single(const Gate2x2& gate, int qubit);

    /// Applies the unitary to `target` on the amplitudes whose control bits
    /// all match their required values. Zero controls reduce to
    /// apply_single; X with two controls is the Toffoli. Control bits not
    /// matching are left bit-exact.
    void apply_controlled(const Gate2x2& gate, const std::vector<ControlBit>& controls,
                          int target);

    /// Born-rule outcome probabilities |amp_i|^2.
    std::vector<double> probabilities() const;

    double norm_squared() const;

    /// Draws `shots` outcomes i.i.d. from probabilities(). The generator is
    /// std::mt19937_64 seeded with `seed`; each shot maps one 53-bit uniform
    /// double through the inverse CDF of the cumulative probabilities, so
    /// results are reproducible across platforms.
    ShotResult sample(std::uint64_t shots, std::uint64_t seed) const;

private:
    int num_qubits_;
    std::vector<Complex> amps_;
};

/// Spec entry point: the all-zeros register |0>^n.
StateVector init_zero(int num_qubits);

}  // namespace bqc
