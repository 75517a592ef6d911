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

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "bqc/statevector.hpp"

namespace bqc::test {

inline double uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_angle(std::mt19937_64& rng) {
    return (2.0 * uniform(rng) - 1.0) * 3.14159265358979323846;
}

/// Random normalized state with independent complex Gaussian amplitudes.
inline StateVector random_state(int num_qubits, std::mt19937_64& rng) {
    StateVector state(num_qubits);
    double norm = 0.0;
    for (Complex& a : state.amplitudes()) {
        // Box-Muller
        const double u1 = std::max(uniform(rng), 1e-300);
        const double u2 = uniform(rng);
        const double r = std::sqrt(-2.0 * std::log(u1));
        a = Complex{r * std::cos(6.283185307179586 * u2),
                    r * std::sin(6.283185307179586 * u2)};
        norm += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm);
    for (Complex& a : state.amplitudes()) a *= inv;
    return state;
}

/// Largest per-amplitude deviation after aligning a single global phase on
/// the largest reference amplitude.
inline double max_diff_up_to_phase(const std::vector<Complex>& a,
                                   const std::vector<Complex>& b) {
    std::size_t ref = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i]) > std::abs(a[ref])) ref = i;
    }
    if (std::abs(b[ref]) == 0.0) return 1.0;
    const Complex phase = a[ref] / b[ref];
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - phase * b[i]));
    }
    return worst;
}

inline double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

}  // namespace bqc::test
