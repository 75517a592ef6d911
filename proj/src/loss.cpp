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

#include "bqc/loss.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bqc/parallel.hpp"

namespace bqc {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

std::vector<double> sub(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Gate indices carrying a slot of the trainable vector, with bounds checks
// against the bound parameter lengths.
std::vector<std::size_t> trainable_occurrences(const Circuit& circuit,
                                               const ParameterSet& params, ParamVector vec) {
    const int declared = circuit.slot_count(vec);
    if (static_cast<int>(params.vec(vec).size()) < declared) {
        throw std::invalid_argument("gradient: parameter vector shorter than circuit slots");
    }
    std::vector<std::size_t> occurrences;
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        if (const ParamSlot* s = circuit.gates[i].slot(); s && s->vec == vec) {
            occurrences.push_back(i);
        }
    }
    return occurrences;
}

// Conditional mode leans on the prior being constant in the trainable
// parameters: from the first trainable gate onward every gate must target a
// data qubit (ancilla-marginal preserving).
void check_prior_invariance(const Circuit& circuit, const RegisterSplit& split,
                            ParamVector vec) {
    bool seen_trainable = false;
    for (const GateSpec& g : circuit.gates) {
        if (const ParamSlot* s = g.slot(); s && s->vec == vec) seen_trainable = true;
        if (seen_trainable && g.target() >= split.n) {
            throw std::invalid_argument(
                "conditional loss: gate targets an ancilla after trainable gates; "
                "the prior would depend on the trainable parameters");
        }
    }
}

// Per-latent readout for the conditional loss: weights w_i and centered
// kernel images kq_i = K (p_i - f_i), plus the loss value.
struct ConditionalContext {
    std::vector<std::size_t> latents;
    std::vector<double> weights;
    std::vector<std::vector<double>> kq;
    double value = 0.0;
};

ConditionalContext conditional_context(const StateVector& state, const RegisterSplit& split,
                                       const std::vector<DiscreteDistribution>& targets,
                                       const KernelMatrix& kernel) {
    if (targets.empty()) {
        throw std::invalid_argument("conditional loss: no component targets");
    }
    if (targets.size() > split.latent_size()) {
        throw std::invalid_argument("conditional loss: more targets than latent states");
    }
    const DiscreteDistribution w = prior(state, split);
    ConditionalContext ctx;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (w.probs[i] <= kConditioningFloor) continue;
        if (targets[i].support_size() != split.data_size()) {
            throw std::invalid_argument("conditional loss: component target size mismatch");
        }
        const DiscreteDistribution p = likelihood(state, split, i);
        const std::vector<double> diff = sub(p.probs, targets[i].probs);
        ctx.latents.push_back(i);
        ctx.weights.push_back(w.probs[i]);
        ctx.kq.push_back(kernel.apply(diff));
        ctx.value += w.probs[i] * dot(diff, ctx.kq.back());
    }
    return ctx;
}

}  // namespace

void KernelSpec::validate() const {
    if (bandwidths.empty()) throw std::invalid_argument("KernelSpec: no bandwidths");
    for (double b : bandwidths) {
        if (b <= 0.0) throw std::invalid_argument("KernelSpec: bandwidths must be positive");
    }
}

std::vector<double> KernelMatrix::apply(const std::vector<double>& v) const {
    if (v.size() != size) throw std::invalid_argument("KernelMatrix: size mismatch");
    std::vector<double> out(size, 0.0);
    for (std::size_t x = 0; x < size; ++x) {
        const double* row = values.data() + x * size;
        double s = 0.0;
        for (std::size_t y = 0; y < size; ++y) s += row[y] * v[y];
        out[x] = s;
    }
    return out;
}

KernelMatrix kernel_matrix(const KernelSpec& spec, std::size_t domain_size) {
    spec.validate();
    if (domain_size == 0 || domain_size > (std::size_t{1} << 14)) {
        throw std::invalid_argument("kernel_matrix: domain size out of range");
    }
    KernelMatrix k{domain_size, std::vector<double>(domain_size * domain_size, 0.0)};
    const double weight = 1.0 / static_cast<double>(spec.bandwidths.size());
    for (std::size_t x = 0; x < domain_size; ++x) {
        for (std::size_t y = 0; y <= x; ++y) {
            double d;
            if (spec.distance == KernelDistance::Index) {
                d = static_cast<double>(x) - static_cast<double>(y);
            } else {
                d = static_cast<double>(std::popcount(x ^ y));
            }
            double value = 0.0;
            for (double bw : spec.bandwidths) value += std::exp(-d * d / (2.0 * bw));
            value *= weight;
            k.values[x * domain_size + y] = value;
            k.values[y * domain_size + x] = value;
        }
    }
    return k;
}

double mmd(const DiscreteDistribution& p, const DiscreteDistribution& f,
           const KernelMatrix& kernel) {
    if (p.probs.size() != f.probs.size()) {
        throw std::invalid_argument("mmd: support sizes differ");
    }
    const std::vector<double> diff = sub(p.probs, f.probs);
    return dot(diff, kernel.apply(diff));
}

LossValue mmd(const DiscreteDistribution& p, const DiscreteDistribution& f,
              const KernelSpec& spec) {
    return {mmd(p, f, kernel_matrix(spec, p.probs.size())), {}};
}

double mmd_conditional(const StateVector& state, const RegisterSplit& split,
                       const std::vector<DiscreteDistribution>& component_targets,
                       const KernelMatrix& kernel) {
    return conditional_context(state, split, component_targets, kernel).value;
}

ParamVector trainable_vector(const ParameterSet& params) {
    if (params.gamma_frozen == params.theta_frozen) {
        throw std::invalid_argument("exactly one of gamma/theta must be unfrozen");
    }
    return params.gamma_frozen ? ParamVector::Theta : ParamVector::Gamma;
}

ShiftEvaluator::ShiftEvaluator(const Circuit& circuit, const ParameterSet& params,
                               ParamVector vec)
    : circuit_(circuit),
      params_(params),
      occurrences_(trainable_occurrences(circuit, params, vec)),
      base_(std::max(1, circuit.num_qubits())) {
    prefixes_.reserve(occurrences_.size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < circuit_.gates.size(); ++i) {
        if (next < occurrences_.size() && occurrences_[next] == i) {
            prefixes_.push_back(base_);
            ++next;
        }
        apply_gate(base_, circuit_.gates[i], params_);
    }
}

StateVector ShiftEvaluator::shifted(std::size_t o, double delta) const {
    const std::size_t g = occurrences_[o];
    StateVector state = prefixes_[o];
    GateSpec gate = circuit_.gates[g];
    gate.param = resolve_param(gate, params_) + delta;
    apply_gate(state, gate, params_);
    for (std::size_t i = g + 1; i < circuit_.gates.size(); ++i) {
        apply_gate(state, circuit_.gates[i], params_);
    }
    return state;
}

std::size_t ShiftEvaluator::slot_of(std::size_t o) const {
    return static_cast<std::size_t>(circuit_.gates[occurrences_[o]].slot()->index);
}

LossValue gradient_shift(const Circuit& circuit, const ParameterSet& params,
                         const DiscreteDistribution& target, const KernelSpec& spec,
                         const RegisterSplit& split) {
    return gradient_shift(circuit, params, target, kernel_matrix(spec, split.data_size()),
                          split);
}

LossValue gradient_shift(const Circuit& circuit, const ParameterSet& params,
                         const DiscreteDistribution& target, const KernelMatrix& kernel,
                         const RegisterSplit& split) {
    const ParamVector vec = trainable_vector(params);
    if (target.support_size() != split.data_size()) {
        throw std::invalid_argument("gradient_shift: target size mismatch");
    }

    const ShiftEvaluator eval(circuit, params, vec);
    const DiscreteDistribution p = data_marginal(eval.base(), split);
    const std::vector<double> diff = sub(p.probs, target.probs);
    const std::vector<double> kq = kernel.apply(diff);

    LossValue result{dot(diff, kq), std::vector<double>(params.vec(vec).size(), 0.0)};
    std::vector<double> contrib(eval.occurrences().size(), 0.0);
    parallel_for(eval.occurrences().size(), [&](std::size_t o) {
        const DiscreteDistribution plus = data_marginal(eval.shifted(o, kHalfPi), split);
        const DiscreteDistribution minus = data_marginal(eval.shifted(o, -kHalfPi), split);
        contrib[o] = dot(sub(plus.probs, minus.probs), kq);
    });
    for (std::size_t o = 0; o < eval.occurrences().size(); ++o) {
        result.gradient[eval.slot_of(o)] += contrib[o];
    }
    return result;
}

LossValue gradient_fd(const Circuit& circuit, const ParameterSet& params,
                      const DiscreteDistribution& target, const KernelSpec& spec,
                      const RegisterSplit& split, double h) {
    return gradient_fd(circuit, params, target, kernel_matrix(spec, split.data_size()), split,
                       h);
}

LossValue gradient_fd(const Circuit& circuit, const ParameterSet& params,
                      const DiscreteDistribution& target, const KernelMatrix& kernel,
                      const RegisterSplit& split, double h) {
    if (h < 1e-7 || h > 1e-3) {
        throw std::invalid_argument("gradient_fd: h must lie in [1e-7, 1e-3]");
    }
    const ParamVector vec = trainable_vector(params);
    trainable_occurrences(circuit, params, vec);  // length check

    const auto loss_at = [&](const ParameterSet& ps) {
        return mmd(data_marginal(run(circuit, ps), split), target, kernel);
    };

    LossValue result{loss_at(params), std::vector<double>(params.vec(vec).size(), 0.0)};
    parallel_for(result.gradient.size(), [&](std::size_t k) {
        ParameterSet shifted = params;
        shifted.vec(vec)[k] += h;
        const double up = loss_at(shifted);
        shifted.vec(vec)[k] -= 2.0 * h;
        const double down = loss_at(shifted);
        result.gradient[k] = (up - down) / (2.0 * h);
    });
    return result;
}

LossValue gradient_shift_conditional(const Circuit& circuit, const ParameterSet& params,
                                     const std::vector<DiscreteDistribution>& component_targets,
                                     const KernelSpec& spec, const RegisterSplit& split) {
    return gradient_shift_conditional(circuit, params, component_targets,
                                      kernel_matrix(spec, split.data_size()), split);
}

LossValue gradient_shift_conditional(const Circuit& circuit, const ParameterSet& params,
                                     const std::vector<DiscreteDistribution>& component_targets,
                                     const KernelMatrix& kernel, const RegisterSplit& split) {
    const ParamVector vec = trainable_vector(params);
    check_prior_invariance(circuit, split, vec);

    const ShiftEvaluator eval(circuit, params, vec);
    const ConditionalContext ctx =
        conditional_context(eval.base(), split, component_targets, kernel);

    LossValue result{ctx.value, std::vector<double>(params.vec(vec).size(), 0.0)};
    std::vector<double> contrib(eval.occurrences().size(), 0.0);
    parallel_for(eval.occurrences().size(), [&](std::size_t o) {
        const DiscreteDistribution jp{eval.shifted(o, kHalfPi).probabilities()};
        const DiscreteDistribution jm{eval.shifted(o, -kHalfPi).probabilities()};
        double acc = 0.0;
        for (std::size_t t = 0; t < ctx.latents.size(); ++t) {
            const std::size_t latent = ctx.latents[t];
            const DiscreteDistribution pp = likelihood_of_joint(jp, split, latent);
            const DiscreteDistribution pm = likelihood_of_joint(jm, split, latent);
            acc += ctx.weights[t] * dot(sub(pp.probs, pm.probs), ctx.kq[t]);
        }
        contrib[o] = acc;
    });
    for (std::size_t o = 0; o < eval.occurrences().size(); ++o) {
        result.gradient[eval.slot_of(o)] += contrib[o];
    }
    return result;
}

LossValue gradient_fd_conditional(const Circuit& circuit, const ParameterSet& params,
                                  const std::vector<DiscreteDistribution>& component_targets,
                                  const KernelSpec& spec, const RegisterSplit& split,
                                  double h) {
    return gradient_fd_conditional(circuit, params, component_targets,
                                   kernel_matrix(spec, split.data_size()), split, h);
}

LossValue gradient_fd_conditional(const Circuit& circuit, const ParameterSet& params,
                                  const std::vector<DiscreteDistribution>& component_targets,
                                  const KernelMatrix& kernel, const RegisterSplit& split,
                                  double h) {
    if (h < 1e-7 || h > 1e-3) {
        throw std::invalid_argument("gradient_fd: h must lie in [1e-7, 1e-3]");
    }
    const ParamVector vec = trainable_vector(params);
    trainable_occurrences(circuit, params, vec);  // length check

    const auto loss_at = [&](const ParameterSet& ps) {
        return mmd_conditional(run(circuit, ps), split, component_targets, kernel);
    };

    LossValue result{loss_at(params), std::vector<double>(params.vec(vec).size(), 0.0)};
    parallel_for(result.gradient.size(), [&](std::size_t k) {
        ParameterSet shifted = params;
        shifted.vec(vec)[k] += h;
        const double up = loss_at(shifted);
        shifted.vec(vec)[k] -= 2.0 * h;
        const double down = loss_at(shifted);
        result.gradient[k] = (up - down) / (2.0 * h);
    });
    return result;
}

}  // namespace bqc
