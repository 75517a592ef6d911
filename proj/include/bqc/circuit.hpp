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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bqc/statevector.hpp"

namespace bqc {

enum class GateKind { RX, RY, RZ, X, CNOT, CRY, TOFFOLI, MULTI_CTRL_RY };

std::string to_string(GateKind kind);

/// Which named parameter vector a symbolic slot draws from.
enum class ParamVector { Gamma, Theta };

struct ParamSlot {
    ParamVector vec = ParamVector::Theta;
    int index = 0;
    bool operator==(const ParamSlot&) const = default;
};

/// Rotation angle: absent (non-rotation gates), a literal in radians, or a
/// symbolic slot resolved against a ParameterSet at evaluation time.
using Param = std::variant<std::monostate, double, ParamSlot>;

/// One gate application. `qubits` lists controls first, target last.
/// `control_bits` gives the required value per control; it is all ones
/// except for MULTI_CTRL_RY, which may condition on zero bits.
struct GateSpec {
    GateKind kind = GateKind::RY;
    std::vector<int> qubits;
    std::vector<int> control_bits;
    Param param;

    static GateSpec rx(int qubit, Param angle);
    static GateSpec ry(int qubit, Param angle);
    static GateSpec rz(int qubit, Param angle);
    static GateSpec x(int qubit);
    static GateSpec cnot(int control, int target);
    static GateSpec cry(int control, int target, Param angle);
    static GateSpec toffoli(int control_a, int control_b, int target);
    static GateSpec multi_ctrl_ry(std::vector<int> controls, std::vector<int> control_bits,
                                  int target, Param angle);

    int target() const { return qubits.back(); }
    int num_controls() const { return static_cast<int>(qubits.size()) - 1; }
    bool is_rotation() const;
    const ParamSlot* slot() const { return std::get_if<ParamSlot>(&param); }

    /// Structural validity: qubit count matches kind, param arity matches,
    /// indices distinct. Throws std::invalid_argument on violation.
    void validate(int num_qubits) const;

    bool operator==(const GateSpec&) const = default;
};

/// Named parameter vectors bound to a circuit's symbolic slots.
struct ParameterSet {
    std::vector<double> gamma;
    std::vector<double> theta;
    bool gamma_frozen = false;
    bool theta_frozen = false;

    const std::vector<double>& vec(ParamVector v) const {
        return v == ParamVector::Gamma ? gamma : theta;
    }
    std::vector<double>& vec(ParamVector v) {
        return v == ParamVector::Gamma ? gamma : theta;
    }
    bool frozen(ParamVector v) const {
        return v == ParamVector::Gamma ? gamma_frozen : theta_frozen;
    }
};

/// Ordered gate list over n data qubits (indices 0..n-1) followed by m
/// ancilla qubits (indices n..n+m-1).
struct Circuit {
    int num_data_qubits = 0;
    int num_ancilla_qubits = 0;
    std::vector<GateSpec> gates;

    int num_qubits() const { return num_data_qubits + num_ancilla_qubits; }

    void add(GateSpec gate);
    void append(const Circuit& other);

    /// Required length of the named vector: one past the highest slot index
    /// referencing it (0 if unreferenced).
    int slot_count(ParamVector v) const;

    bool operator==(const Circuit&) const = default;
};

/// How likelihood blocks wire ancilla controls to data targets.
enum class ControlStyle { PerLatentState, PerAncillaQubit };

/// Shape of the BQC ansatz: n data qubits, m ancillas, K latent states,
/// J prior layers, L likelihood layers.
struct AnsatzLayout {
    int n = 1;
    int m = 1;
    int num_latents = 1;
    int prior_layers = 1;
    int likelihood_layers = 1;
    ControlStyle control_style = ControlStyle::PerLatentState;

    void validate() const;
};

/// Trainable prior: per layer one RY(gamma) on every ancilla followed by a
/// CNOT chain down the ancilla register. gamma slot count = J*m.
Circuit build_prior_ansatz(const AnsatzLayout& layout);

/// Exact prior preparation: a binary tree of uniformly controlled RY
/// rotations (depth m) loading amplitudes sqrt(prior_i) onto the ancilla
/// register. Latent states with index >= prior.size() get amplitude 0.
/// The returned circuit has no data qubits; see embed_on_ancillas.
Circuit build_prior_exact(const std::vector<double>& prior, int m);

/// Reindexes an ancilla-only circuit onto the ancilla block of an
/// (n + m)-qubit register.
Circuit embed_on_ancillas(const Circuit& ancilla_only, int n);

/// Likelihood blocks connecting ancillas to data qubits. PerLatentState
/// emits one MULTI_CTRL_RY per (layer, latent, data qubit) whose controls
/// pin the whole ancilla register to the latent's bit pattern; theta slot
/// count = L*K*n. PerAncillaQubit emits one CRY per (ancilla, data) pair
/// plus a cycled Toffoli per layer; theta slot count = L*m*n.
Circuit build_likelihood_ansatz(const AnsatzLayout& layout);

/// Ancilla-free baseline: per layer RY and RZ slots on every qubit plus a
/// CNOT chain. theta slot count = 2*layers*n.
Circuit build_qcbm_baseline(int n, int layers);

/// Resolves a gate's angle against the bound parameters.
double resolve_param(const GateSpec& gate, const ParameterSet& params);

/// Applies one gate to a state with the given bound parameters.
void apply_gate(StateVector& state, const GateSpec& gate, const ParameterSet& params);

/// Simulates the circuit from |0...0>.
StateVector run(const Circuit& circuit, const ParameterSet& params);

/// Substitutes every symbolic slot with its bound value.
Circuit bind_literals(const Circuit& circuit, const ParameterSet& params);

/// Rewrites CRY / TOFFOLI / MULTI_CTRL_RY into single-qubit rotations, X and
/// CNOT. CRY and MULTI_CTRL_RY expansions are exact; the Toffoli expansion
/// matches up to a global phase. Rotation angles must be literal.
std::vector<GateSpec> decompose(const GateSpec& gate);

/// Applies decompose() to every gate it supports, copying the rest.
Circuit decompose_circuit(const Circuit& circuit);

// Line-oriented text form, one gate per line:
//   KIND q0,q1,...  [angle | slot:gamma[i] | slot:theta[i]]
// Zero-polarity controls of MULTI_CTRL_RY carry a '~' prefix on the qubit.
std::string print_gate(const GateSpec& gate);
GateSpec parse_gate(const std::string& line);
std::string print_circuit(const Circuit& circuit);
Circuit parse_circuit(const std::string& text, int num_data_qubits, int num_ancilla_qubits);

}  // namespace bqc
