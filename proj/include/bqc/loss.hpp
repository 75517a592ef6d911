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

#include "bqc/circuit.hpp"
#include "bqc/probability.hpp"

namespace bqc {

enum class KernelDistance { Index, Hamming };

/// Mixture-of-Gaussians kernel over outcome labels. Bandwidths are the
/// Gaussian variances sigma_k^2 in squared index units; every component
/// gets equal weight. Distance is |x - y| on integer labels by default,
/// popcount(x ^ y) in Hamming mode.
struct KernelSpec {
    std::vector<double> bandwidths = {0.25, 4.0, 16.0};
    KernelDistance distance = KernelDistance::Index;

    void validate() const;
};

/// Dense symmetric kernel table K[x][y].
struct KernelMatrix {
    std::size_t size = 0;
    std::vector<double> values;  // row-major

    double at(std::size_t x, std::size_t y) const { return values[x * size + y]; }

    /// K * v.
    std::vector<double> apply(const std::vector<double>& v) const;
};

KernelMatrix kernel_matrix(const KernelSpec& spec, std::size_t domain_size);

/// Squared MMD value with optional gradient over the unfrozen parameter
/// vector.
struct LossValue {
    double value = 0.0;
    std::vector<double> gradient;
};

/// (p - f)^T K (p - f): the kernel expansion of the squared RKHS distance.
double mmd(const DiscreteDistribution& p, const DiscreteDistribution& f,
           const KernelMatrix& kernel);
LossValue mmd(const DiscreteDistribution& p, const DiscreteDistribution& f,
              const KernelSpec& spec);

/// Per-latent conditional loss: sum_i prior_i * mmd(P(.|lambda_i),
/// component_targets[i]), skipping latents whose mass is below the
/// conditioning floor.
double mmd_conditional(const StateVector& state, const RegisterSplit& split,
                       const std::vector<DiscreteDistribution>& component_targets,
                       const KernelMatrix& kernel);

/// The vector the gradient differentiates: exactly one of gamma/theta must
/// be unfrozen. Throws std::invalid_argument otherwise.
ParamVector trainable_vector(const ParameterSet& params);

/// Caches the state just before every gate that carries a trainable slot,
/// so a +-pi/2 evaluation replays only the circuit tail after its gate.
/// Borrows the circuit and parameters; both must outlive the evaluator.
class ShiftEvaluator {
public:
    ShiftEvaluator(const Circuit& circuit, const ParameterSet& params, ParamVector vec);

    const std::vector<std::size_t>& occurrences() const { return occurrences_; }
    const StateVector& base() const { return base_; }

    /// State of the full circuit with occurrence o's angle offset by delta.
    StateVector shifted(std::size_t o, double delta) const;

    /// Slot index bound to occurrence o.
    std::size_t slot_of(std::size_t o) const;

private:
    const Circuit& circuit_;
    const ParameterSet& params_;
    std::vector<std::size_t> occurrences_;
    std::vector<StateVector> prefixes_;
    StateVector base_;
};

/// Loss on the data marginal with the parameter-shift gradient: for each
/// trainable slot, grad_k = (p+ - p-)^T K (p - f) with the slot's gate
/// evaluated at +-pi/2. Gates sharing a slot contribute one shift term
/// each. Exact probabilities; slot evaluations run in parallel.
LossValue gradient_shift(const Circuit& circuit, const ParameterSet& params,
                         const DiscreteDistribution& target, const KernelSpec& spec,
                         const RegisterSplit& split);
LossValue gradient_shift(const Circuit& circuit, const ParameterSet& params,
                         const DiscreteDistribution& target, const KernelMatrix& kernel,
                         const RegisterSplit& split);

/// Central finite differences (L(x_k + h) - L(x_k - h)) / 2h per slot;
/// the independent oracle for gradient_shift.
LossValue gradient_fd(const Circuit& circuit, const ParameterSet& params,
                      const DiscreteDistribution& target, const KernelSpec& spec,
                      const RegisterSplit& split, double h);
LossValue gradient_fd(const Circuit& circuit, const ParameterSet& params,
                      const DiscreteDistribution& target, const KernelMatrix& kernel,
                      const RegisterSplit& split, double h);

/// Conditional-mode counterparts used for the BAS joint-target training
/// mode. The circuit must keep the prior independent of the trainable
/// slots: no gate from the first trainable gate onward may target an
/// ancilla qubit.
LossValue gradient_shift_conditional(const Circuit& circuit, const ParameterSet& params,
                                     const std::vector<DiscreteDistribution>& component_targets,
                                     const KernelSpec& spec, const RegisterSplit& split);
LossValue gradient_shift_conditional(const Circuit& circuit, const ParameterSet& params,
                                     const std::vector<DiscreteDistribution>& component_targets,
                                     const KernelMatrix& kernel, const RegisterSplit& split);
LossValue gradient_fd_conditional(const Circuit& circuit, const ParameterSet& params,
                                  const std::vector<DiscreteDistribution>& component_targets,
                                  const KernelSpec& spec, const RegisterSplit& split, double h);
LossValue gradient_fd_conditional(const Circuit& circuit, const ParameterSet& params,
                                  const std::vector<DiscreteDistribution>& component_targets,
                                  const KernelMatrix& kernel, const RegisterSplit& split,
                                  double h);

}  // namespace bqc
