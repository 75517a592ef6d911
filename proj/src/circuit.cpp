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

#include "bqc/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bqc {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<int> ones(int count) { return std::vector<int>(count, 1); }

}  // namespace

std::string to_string(GateKind kind) {
    switch (kind) {
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::X: return "X";
        case GateKind::CNOT: return "CNOT";
        case GateKind::CRY: return "CRY";
        case GateKind::TOFFOLI: return "TOFFOLI";
        case GateKind::MULTI_CTRL_RY: return "MULTI_CTRL_RY";
    }
    throw std::invalid_argument("to_string: unknown gate kind");
}

GateSpec GateSpec::rx(int qubit, Param angle) { return {GateKind::RX, {qubit}, {}, angle}; }
GateSpec GateSpec::ry(int qubit, Param angle) { return {GateKind::RY, {qubit}, {}, angle}; }
GateSpec GateSpec::rz(int qubit, Param angle) { return {GateKind::RZ, {qubit}, {}, angle}; }
GateSpec GateSpec::x(int qubit) { return {GateKind::X, {qubit}, {}, std::monostate{}}; }

GateSpec GateSpec::cnot(int control, int target) {
    return {GateKind::CNOT, {control, target}, ones(1), std::monostate{}};
}

GateSpec GateSpec::cry(int control, int target, Param angle) {
    return {GateKind::CRY, {control, target}, ones(1), angle};
}

GateSpec GateSpec::toffoli(int control_a, int control_b, int target) {
    return {GateKind::TOFFOLI, {control_a, control_b, target}, ones(2), std::monostate{}};
}

GateSpec GateSpec::multi_ctrl_ry(std::vector<int> controls, std::vector<int> control_bits,
                                 int target, Param angle) {
    std::vector<int> qubits = std::move(controls);
    qubits.push_back(target);
    return {GateKind::MULTI_CTRL_RY, std::move(qubits), std::move(control_bits), angle};
}

bool GateSpec::is_rotation() const {
    switch (kind) {
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
        case GateKind::CRY:
        case GateKind::MULTI_CTRL_RY:
            return true;
        default:
            return false;
    }
}

void GateSpec::validate(int num_qubits) const {
    const auto fail = [this](const std::string& what) {
        throw std::invalid_argument(to_string(kind) + ": " + what);
    };

    int expected = -1;
    switch (kind) {
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
        case GateKind::X: expected = 1; break;
        case GateKind::CNOT:
        case GateKind::CRY: expected = 2; break;
        case GateKind::TOFFOLI: expected = 3; break;
        case GateKind::MULTI_CTRL_RY: expected = -1; break;
    }
    if (expected >= 0 && static_cast<int>(qubits.size()) != expected) {
        fail("expected " + std::to_string(expected) + " qubits, got " +
             std::to_string(qubits.size()));
    }
    if (kind == GateKind::MULTI_CTRL_RY && qubits.size() < 2) {
        fail("needs at least one control and a target");
    }

    if (is_rotation()) {
        if (std::holds_alternative<std::monostate>(param)) fail("missing rotation angle");
    } else {
        if (!std::holds_alternative<std::monostate>(param)) fail("takes no parameter");
    }

    if (static_cast<int>(control_bits.size()) != num_controls()) {
        fail("control_bits size does not match control count");
    }
    for (std::size_t i = 0; i < control_bits.size(); ++i) {
        if (control_bits[i] != 0 && control_bits[i] != 1) fail("control bit must be 0 or 1");
        if (kind != GateKind::MULTI_CTRL_RY && control_bits[i] != 1) {
            fail("only MULTI_CTRL_RY may condition on a zero control");
        }
    }

    std::set<int> seen;
    for (int q : qubits) {
        if (q < 0) fail("negative qubit index");
        if (num_qubits > 0 && q >= num_qubits) {
            fail("qubit " + std::to_string(q) + " out of range for " +
                 std::to_string(num_qubits) + " qubits");
        }
        if (!seen.insert(q).second) fail("duplicate qubit index " + std::to_string(q));
    }
}

void Circuit::add(GateSpec gate) {
    gate.validate(num_qubits());
    gates.push_back(std::move(gate));
}

void Circuit::append(const Circuit& other) {
    if (other.num_data_qubits != num_data_qubits ||
        other.num_ancilla_qubits != num_ancilla_qubits) {
        throw std::invalid_argument("Circuit::append: register shapes differ");
    }
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

int Circuit::slot_count(ParamVector v) const {
    int count = 0;
    for (const GateSpec& g : gates) {
        if (const ParamSlot* s = g.slot(); s && s->vec == v) {
            count = std::max(count, s->index + 1);
        }
    }
    return count;
}

void AnsatzLayout::validate() const {
    if (n < 1) throw std::invalid_argument("AnsatzLayout: n must be >= 1");
    if (m < 0) throw std::invalid_argument("AnsatzLayout: m must be >= 0");
    if (num_latents < 1) throw std::invalid_argument("AnsatzLayout: num_latents must be >= 1");
    if (prior_layers < 1 || likelihood_layers < 1) {
        throw std::invalid_argument("AnsatzLayout: layer counts must be >= 1");
    }
    if (num_latents > (1 << m)) {
        throw std::invalid_argument("AnsatzLayout: num_latents exceeds 2^m");
    }
}

Circuit build_prior_ansatz(const AnsatzLayout& layout) {
    layout.validate();
    Circuit c{layout.n, layout.m, {}};
    int slot = 0;
    for (int layer = 0; layer < layout.prior_layers; ++layer) {
        for (int a = 0; a < layout.m; ++a) {
            c.add(GateSpec::ry(layout.n + a, ParamSlot{ParamVector::Gamma, slot++}));
        }
        for (int a = 0; a + 1 < layout.m; ++a) {
            c.add(GateSpec::cnot(layout.n + a, layout.n + a + 1));
        }
    }
    return c;
}

Circuit build_prior_exact(const std::vector<double>& prior, int m) {
    if (m < 1 || m > 24) throw std::invalid_argument("build_prior_exact: m out of range");
    const std::size_t capacity = std::size_t{1} << m;
    if (prior.size() > capacity) {
        throw std::invalid_argument("build_prior_exact: " + std::to_string(prior.size()) +
                                    " latent states exceed 2^" + std::to_string(m));
    }
    double sum = 0.0;
    for (double p : prior) {
        if (p < 0.0) throw std::invalid_argument("build_prior_exact: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("build_prior_exact: prior does not sum to 1");
    }

    // mass[t][c] = total probability of latent indices whose first t bits
    // (ancilla 0 = most significant) equal c.
    std::vector<std::vector<double>> mass(m + 1);
    mass[m].assign(capacity, 0.0);
    std::copy(prior.begin(), prior.end(), mass[m].begin());
    for (int t = m - 1; t >= 0; --t) {
        mass[t].assign(std::size_t{1} << t, 0.0);
        for (std::size_t c = 0; c < mass[t].size(); ++c) {
            mass[t][c] = mass[t + 1][2 * c] + mass[t + 1][2 * c + 1];
        }
    }

    Circuit c{0, m, {}};
    for (int t = 0; t < m; ++t) {
        for (std::size_t prefix = 0; prefix < (std::size_t{1} << t); ++prefix) {
            const double left = mass[t + 1][2 * prefix];
            const double right = mass[t + 1][2 * prefix + 1];
            if (left + right <= 0.0) continue;
            const double angle = 2.0 * std::atan2(std::sqrt(right), std::sqrt(left));
            if (angle == 0.0) continue;
            if (t == 0) {
                c.add(GateSpec::ry(0, angle));
            } else {
                std::vector<int> controls(t);
                std::vector<int> bits(t);
                for (int j = 0; j < t; ++j) {
                    controls[j] = j;
                    bits[j] = static_cast<int>((prefix >> (t - 1 - j)) & 1);
                }
                c.add(GateSpec::multi_ctrl_ry(controls, bits, t, angle));
            }
        }
    }
    return c;
}

Circuit embed_on_ancillas(const Circuit& ancilla_only, int n) {
    if (ancilla_only.num_data_qubits != 0) {
        throw std::invalid_argument("embed_on_ancillas: circuit already has data qubits");
    }
    Circuit c{n, ancilla_only.num_ancilla_qubits, {}};
    for (GateSpec g : ancilla_only.gates) {
        for (int& q : g.qubits) q += n;
        c.add(std::move(g));
    }
    return c;
}

Circuit build_likelihood_ansatz(const AnsatzLayout& layout) {
    layout.validate();
    Circuit c{layout.n, layout.m, {}};
    int slot = 0;
    if (layout.control_style == ControlStyle::PerLatentState) {
        std::vector<int> controls(layout.m);
        for (int j = 0; j < layout.m; ++j) controls[j] = layout.n + j;
        for (int layer = 0; layer < layout.likelihood_layers; ++layer) {
            for (int latent = 0; latent < layout.num_latents; ++latent) {
                std::vector<int> bits(layout.m);
                for (int j = 0; j < layout.m; ++j) {
                    bits[j] = (latent >> (layout.m - 1 - j)) & 1;
                }
                for (int q = 0; q < layout.n; ++q) {
                    const ParamSlot s{ParamVector::Theta, slot++};
                    if (layout.m == 0) {
                        c.add(GateSpec::ry(q, s));
                    } else {
                        c.add(GateSpec::multi_ctrl_ry(controls, bits, q, s));
                    }
                }
            }
        }
    } else {
        for (int layer = 0; layer < layout.likelihood_layers; ++layer) {
            for (int a = 0; a < layout.m; ++a) {
                for (int q = 0; q < layout.n; ++q) {
                    c.add(GateSpec::cry(layout.n + a, q,
                                        ParamSlot{ParamVector::Theta, slot++}));
                }
            }
            // One entangler per layer; needs two distinct ancillas.
            if (layout.m >= 2) {
                const int a0 = layer % layout.m;
                const int a1 = (layer + 1) % layout.m;
                c.add(GateSpec::toffoli(layout.n + a0, layout.n + a1, layer % layout.n));
            }
        }
    }
    return c;
}

Circuit build_qcbm_baseline(int n, int layers) {
    if (n < 1 || layers < 1) {
        throw std::invalid_argument("build_qcbm_baseline: n and layers must be >= 1");
    }
    Circuit c{n, 0, {}};
    int slot = 0;
    for (int layer = 0; layer < layers; ++layer) {
        for (int q = 0; q < n; ++q) {
            c.add(GateSpec::ry(q, ParamSlot{ParamVector::Theta, slot++}));
        }
        for (int q = 0; q < n; ++q) {
            c.add(GateSpec::rz(q, ParamSlot{ParamVector::Theta, slot++}));
        }
        for (int q = 0; q + 1 < n; ++q) {
            c.add(GateSpec::cnot(q, q + 1));
        }
    }
    return c;
}

double resolve_param(const GateSpec& gate, const ParameterSet& params) {
    if (const double* lit = std::get_if<double>(&gate.param)) return *lit;
    if (const ParamSlot* s = std::get_if<ParamSlot>(&gate.param)) {
        const std::vector<double>& v = params.vec(s->vec);
        if (s->index < 0 || static_cast<std::size_t>(s->index) >= v.size()) {
            throw std::invalid_argument(
                "unresolved parameter slot " +
                std::string(s->vec == ParamVector::Gamma ? "gamma[" : "theta[") +
                std::to_string(s->index) + "]");
        }
        return v[static_cast<std::size_t>(s->index)];
    }
    throw std::invalid_argument("gate carries no rotation angle");
}

void apply_gate(StateVector& state, const GateSpec& gate, const ParameterSet& params) {
    std::vector<ControlBit> controls(gate.num_controls());
    for (int i = 0; i < gate.num_controls(); ++i) {
        controls[static_cast<std::size_t>(i)] = {gate.qubits[static_cast<std::size_t>(i)],
                                                 gate.control_bits[static_cast<std::size_t>(i)]};
    }
    switch (gate.kind) {
        case GateKind::RX:
            state.apply_single(gate_rx(resolve_param(gate, params)), gate.target());
            break;
        case GateKind::RY:
            state.apply_single(gate_ry(resolve_param(gate, params)), gate.target());
            break;
        case GateKind::RZ:
            state.apply_single(gate_rz(resolve_param(gate, params)), gate.target());
            break;
        case GateKind::X:
            state.apply_single(gate_x(), gate.target());
            break;
        case GateKind::CNOT:
        case GateKind::TOFFOLI:
            state.apply_controlled(gate_x(), controls, gate.target());
            break;
        case GateKind::CRY:
        case GateKind::MULTI_CTRL_RY:
            state.apply_controlled(gate_ry(resolve_param(gate, params)), controls,
                                   gate.target());
            break;
    }
}

StateVector run(const Circuit& circuit, const ParameterSet& params) {
    StateVector state(std::max(1, circuit.num_qubits()));
    for (const GateSpec& g : circuit.gates) apply_gate(state, g, params);
    return state;
}

Circuit bind_literals(const Circuit& circuit, const ParameterSet& params) {
    Circuit bound{circuit.num_data_qubits, circuit.num_ancilla_qubits, {}};
    for (GateSpec g : circuit.gates) {
        if (g.slot()) g.param = resolve_param(g, params);
        bound.gates.push_back(std::move(g));
    }
    return bound;
}

namespace {

double literal_angle(const GateSpec& gate) {
    if (const double* lit = std::get_if<double>(&gate.param)) return *lit;
    throw std::invalid_argument("decompose: rotation angle must be literal; bind slots first");
}

// Multi-controlled RY peels one control per level: with V = RY(theta/2),
// [C^{k-1}V][CNOT][C^{k-1}V^{+-1}][CNOT] equals C^k RY(theta) exactly. A
// zero-polarity spent control flips which half carries the sign.
void emit_mcry(std::vector<GateSpec>& out, const std::vector<int>& controls,
               const std::vector<int>& bits, std::size_t depth, int target, double theta) {
    if (depth == 0) {
        out.push_back(GateSpec::ry(target, theta));
        return;
    }
    const int spent_qubit = controls[depth - 1];
    const int spent_bit = bits[depth - 1];
    emit_mcry(out, controls, bits, depth - 1, target, theta / 2.0);
    out.push_back(GateSpec::cnot(spent_qubit, target));
    emit_mcry(out, controls, bits, depth - 1, target,
              spent_bit == 1 ? -theta / 2.0 : theta / 2.0);
    out.push_back(GateSpec::cnot(spent_qubit, target));
}

// H = RY(pi/2) * Z up to phase; Z folds into RZ(pi).
void emit_h(std::vector<GateSpec>& out, int qubit) {
    out.push_back(GateSpec::rz(qubit, kPi));
    out.push_back(GateSpec::ry(qubit, kPi / 2.0));
}

}  // namespace

std::vector<GateSpec> decompose(const GateSpec& gate) {
    std::vector<GateSpec> out;
    switch (gate.kind) {
        case GateKind::CRY: {
            const double theta = literal_angle(gate);
            const int c = gate.qubits[0], t = gate.qubits[1];
            out.push_back(GateSpec::ry(t, theta / 2.0));
            out.push_back(GateSpec::cnot(c, t));
            out.push_back(GateSpec::ry(t, -theta / 2.0));
            out.push_back(GateSpec::cnot(c, t));
            return out;
        }
        case GateKind::MULTI_CTRL_RY: {
            const double theta = literal_angle(gate);
            std::vector<int> controls(gate.qubits.begin(), gate.qubits.end() - 1);
            emit_mcry(out, controls, gate.control_bits, controls.size(), gate.target(), theta);
            return out;
        }
        case GateKind::TOFFOLI: {
            // Standard 6-CNOT construction; T = RZ(pi/4) up to phase.
            const int c1 = gate.qubits[0], c2 = gate.qubits[1], t = gate.qubits[2];
            const double T = kPi / 4.0;
            emit_h(out, t);
            out.push_back(GateSpec::cnot(c2, t));
            out.push_back(GateSpec::rz(t, -T));
            out.push_back(GateSpec::cnot(c1, t));
            out.push_back(GateSpec::rz(t, T));
            out.push_back(GateSpec::cnot(c2, t));
            out.push_back(GateSpec::rz(t, -T));
            out.push_back(GateSpec::cnot(c1, t));
            out.push_back(GateSpec::rz(c2, T));
            out.push_back(GateSpec::rz(t, T));
            emit_h(out, t);
            out.push_back(GateSpec::cnot(c1, c2));
            out.push_back(GateSpec::rz(c1, T));
            out.push_back(GateSpec::rz(c2, -T));
            out.push_back(GateSpec::cnot(c1, c2));
            return out;
        }
        default:
            throw std::invalid_argument("decompose: unsupported gate kind " +
                                        to_string(gate.kind));
    }
}

Circuit decompose_circuit(const Circuit& circuit) {
    Circuit out{circuit.num_data_qubits, circuit.num_ancilla_qubits, {}};
    for (const GateSpec& g : circuit.gates) {
        switch (g.kind) {
            case GateKind::CRY:
            case GateKind::TOFFOLI:
            case GateKind::MULTI_CTRL_RY:
                for (GateSpec& d : decompose(g)) out.add(std::move(d));
                break;
            default:
                out.add(g);
        }
    }
    return out;
}

std::string print_gate(const GateSpec& gate) {
    std::string line = to_string(gate.kind) + " ";
    for (std::size_t i = 0; i < gate.qubits.size(); ++i) {
        if (i > 0) line += ',';
        if (i < gate.control_bits.size() && gate.control_bits[i] == 0) line += '~';
        line += std::to_string(gate.qubits[i]);
    }
    if (const double* lit = std::get_if<double>(&gate.param)) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", *lit);
        line += ' ';
        line += buf;
    } else if (const ParamSlot* s = std::get_if<ParamSlot>(&gate.param)) {
        line += " slot:";
        line += s->vec == ParamVector::Gamma ? "gamma" : "theta";
        line += '[' + std::to_string(s->index) + ']';
    }
    return line;
}

namespace {

GateKind parse_kind(const std::string& token) {
    static const std::vector<std::pair<std::string, GateKind>> kinds = {
        {"RX", GateKind::RX},           {"RY", GateKind::RY},
        {"RZ", GateKind::RZ},           {"X", GateKind::X},
        {"CNOT", GateKind::CNOT},       {"CRY", GateKind::CRY},
        {"TOFFOLI", GateKind::TOFFOLI}, {"MULTI_CTRL_RY", GateKind::MULTI_CTRL_RY},
    };
    for (const auto& [name, kind] : kinds) {
        if (token == name) return kind;
    }
    throw std::invalid_argument("parse_gate: unknown gate kind '" + token + "'");
}

Param parse_param(const std::string& token) {
    if (token.rfind("slot:", 0) == 0) {
        const std::size_t open = token.find('[');
        const std::size_t close = token.find(']');
        if (open == std::string::npos || close == std::string::npos || close < open) {
            throw std::invalid_argument("parse_gate: malformed slot '" + token + "'");
        }
        const std::string name = token.substr(5, open - 5);
        ParamVector vec;
        if (name == "gamma") {
            vec = ParamVector::Gamma;
        } else if (name == "theta") {
            vec = ParamVector::Theta;
        } else {
            throw std::invalid_argument("parse_gate: unknown parameter vector '" + name + "'");
        }
        return ParamSlot{vec, std::stoi(token.substr(open + 1, close - open - 1))};
    }
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    if (used != token.size()) {
        throw std::invalid_argument("parse_gate: malformed angle '" + token + "'");
    }
    return value;
}

}  // namespace

GateSpec parse_gate(const std::string& line) {
    std::istringstream in(line);
    std::string kind_token, qubit_token, param_token, extra;
    in >> kind_token >> qubit_token;
    if (kind_token.empty() || qubit_token.empty()) {
        throw std::invalid_argument("parse_gate: expected 'KIND qubits [param]', got '" +
                                    line + "'");
    }
    GateSpec gate;
    gate.kind = parse_kind(kind_token);

    std::istringstream qubits(qubit_token);
    std::string item;
    while (std::getline(qubits, item, ',')) {
        bool zero_ctrl = false;
        if (!item.empty() && item[0] == '~') {
            zero_ctrl = true;
            item.erase(0, 1);
        }
        std::size_t used = 0;
        const int q = std::stoi(item, &used);
        if (used != item.size()) {
            throw std::invalid_argument("parse_gate: malformed qubit '" + item + "'");
        }
        gate.qubits.push_back(q);
        gate.control_bits.push_back(zero_ctrl ? 0 : 1);
    }
    if (gate.qubits.empty()) throw std::invalid_argument("parse_gate: no qubits in '" + line + "'");
    gate.control_bits.pop_back();  // last entry belongs to the target

    if (in >> param_token) gate.param = parse_param(param_token);
    if (in >> extra) {
        throw std::invalid_argument("parse_gate: trailing token '" + extra + "'");
    }
    gate.validate(0);
    return gate;
}

std::string print_circuit(const Circuit& circuit) {
    std::string text;
    for (const GateSpec& g : circuit.gates) {
        text += print_gate(g);
        text += '\n';
    }
    return text;
}

Circuit parse_circuit(const std::string& text, int num_data_qubits, int num_ancilla_qubits) {
    Circuit c{num_data_qubits, num_ancilla_qubits, {}};
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        c.add(parse_gate(line));
    }
    return c;
}

}  // namespace bqc
