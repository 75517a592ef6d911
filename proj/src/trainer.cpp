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

#include "bqc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bqc/parallel.hpp"

namespace bqc {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kFdProbe = 1e-5;
constexpr double kShiftFdTol = 1e-6;
constexpr double kAdamEps = 1e-8;

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double uniform53(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

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

// Loss and parameter-shift gradient from fresh finite-shot estimates. Every
// distribution (base and each shifted circuit) comes from its own sample
// with a seed derived from (seed, iter, eval id), so runs are reproducible
// and shifted evaluations never reuse shots.
LossValue shot_gradient(const Circuit& circuit, const ParameterSet& params,
                        const DiscreteDistribution& target,
                        const std::vector<DiscreteDistribution>& component_targets,
                        const KernelMatrix& kernel, const RegisterSplit& split,
                        ParamVector vec, std::int64_t shots, std::uint64_t seed,
                        std::uint64_t iter) {
    const auto empirical_joint = [&](const StateVector& st, std::uint64_t eval_id) {
        const ShotResult sr =
            st.sample(static_cast<std::uint64_t>(shots), derive_seed(seed, iter, eval_id));
        return empirical_distribution(sr, st.dim());
    };

    const ShiftEvaluator eval(circuit, params, vec);
    const DiscreteDistribution joint0 = empirical_joint(eval.base(), 0);
    const std::size_t count = eval.occurrences().size();

    LossValue result;
    result.gradient.assign(params.vec(vec).size(), 0.0);
    std::vector<double> contrib(count, 0.0);

    if (component_targets.empty()) {
        const DiscreteDistribution p = data_marginal_of_joint(joint0, split);
        const std::vector<double> diff = sub(p.probs, target.probs);
        const std::vector<double> kq = kernel.apply(diff);
        result.value = dot(diff, kq);
        parallel_for(count, [&](std::size_t o) {
            const DiscreteDistribution jp =
                empirical_joint(eval.shifted(o, kHalfPi), 2 * o + 1);
            const DiscreteDistribution jm =
                empirical_joint(eval.shifted(o, -kHalfPi), 2 * o + 2);
            contrib[o] = dot(sub(data_marginal_of_joint(jp, split).probs,
                                 data_marginal_of_joint(jm, split).probs),
                             kq);
        });
    } else {
        const DiscreteDistribution w = prior_of_joint(joint0, split);
        std::vector<std::size_t> latents;
        std::vector<std::vector<double>> kq;
        for (std::size_t i = 0; i < component_targets.size(); ++i) {
            if (w.probs[i] <= kConditioningFloor) continue;
            const DiscreteDistribution p = likelihood_of_joint(joint0, split, i);
            const std::vector<double> diff = sub(p.probs, component_targets[i].probs);
            latents.push_back(i);
            kq.push_back(kernel.apply(diff));
            result.value += w.probs[i] * dot(diff, kq.back());
        }
        parallel_for(count, [&](std::size_t o) {
            const DiscreteDistribution jp =
                empirical_joint(eval.shifted(o, kHalfPi), 2 * o + 1);
            const DiscreteDistribution jm =
                empirical_joint(eval.shifted(o, -kHalfPi), 2 * o + 2);
            const DiscreteDistribution wp = prior_of_joint(jp, split);
            const DiscreteDistribution wm = prior_of_joint(jm, split);
            double acc = 0.0;
            for (std::size_t t = 0; t < latents.size(); ++t) {
                const std::size_t i = latents[t];
                // A latent can receive no shots in a shifted sample; skip it.
                if (wp.probs[i] <= kConditioningFloor || wm.probs[i] <= kConditioningFloor) {
                    continue;
                }
                acc += w.probs[i] * dot(sub(likelihood_of_joint(jp, split, i).probs,
                                            likelihood_of_joint(jm, split, i).probs),
                                        kq[t]);
            }
            contrib[o] = acc;
        });
    }
    for (std::size_t o = 0; o < count; ++o) {
        result.gradient[eval.slot_of(o)] += contrib[o];
    }
    return result;
}

}  // namespace

void TrainConfig::validate() const {
    if (max_iters < 1) throw std::invalid_argument("TrainConfig: max_iters must be >= 1");
    if (tolerance < 0.0) throw std::invalid_argument("TrainConfig: tolerance must be >= 0");
    if (learning_rate <= 0.0) {
        throw std::invalid_argument("TrainConfig: learning_rate must be positive");
    }
    if (shots != kExactShots && shots < 1) {
        throw std::invalid_argument("TrainConfig: shots must be EXACT or >= 1");
    }
    if (init_scale < 0.0) throw std::invalid_argument("TrainConfig: init_scale must be >= 0");
    if (adam_beta1 < 0.0 || adam_beta1 >= 1.0 || adam_beta2 < 0.0 || adam_beta2 >= 1.0) {
        throw std::invalid_argument("TrainConfig: adam betas must lie in [0, 1)");
    }
    kernel.validate();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix(splitmix(splitmix(seed) ^ a) ^ b);
}

TrainReport train(const Circuit& circuit, const ParameterSet& params,
                  const DiscreteDistribution& target, const TrainConfig& config,
                  const RegisterSplit& split,
                  const std::vector<DiscreteDistribution>& component_targets) {
    config.validate();
    if (circuit.num_qubits() != split.num_qubits()) {
        throw std::invalid_argument("train: circuit and register split disagree");
    }
    target.validate();
    if (target.support_size() != split.data_size()) {
        throw std::invalid_argument("train: target must cover the data register");
    }
    if (config.mode == TrainMode::LearnTheta &&
        (!params.gamma_frozen || params.theta_frozen)) {
        throw std::invalid_argument(
            "train: LEARN_THETA requires gamma frozen and theta unfrozen");
    }
    if (config.mode == TrainMode::LearnGamma &&
        (!params.theta_frozen || params.gamma_frozen)) {
        throw std::invalid_argument(
            "train: LEARN_GAMMA requires theta frozen and gamma unfrozen");
    }
    for (ParamVector v : {ParamVector::Gamma, ParamVector::Theta}) {
        if (static_cast<int>(params.vec(v).size()) != circuit.slot_count(v)) {
            throw std::invalid_argument("train: parameter vector length does not match the "
                                        "circuit's slot count");
        }
    }
    for (const DiscreteDistribution& t : component_targets) t.validate();
    if (!component_targets.empty() && config.mode != TrainMode::LearnTheta) {
        // The conditional gradient treats the prior as constant.
        throw std::invalid_argument("train: conditional targets require LEARN_THETA");
    }

    const ParamVector vec = trainable_vector(params);
    ParameterSet work = params;
    if (!config.warm_start) {
        std::mt19937_64 rng(config.seed);
        for (double& v : work.vec(vec)) {
            v = (2.0 * uniform53(rng) - 1.0) * config.init_scale;
        }
    }

    std::vector<std::size_t> occurrences;
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        if (const ParamSlot* s = circuit.gates[i].slot(); s && s->vec == vec) {
            occurrences.push_back(i);
        }
    }

    const KernelMatrix kernel = kernel_matrix(config.kernel, split.data_size());
    const bool exact = config.shots == kExactShots;
    const bool conditional = !component_targets.empty();

    const auto exact_shift = [&](const ParameterSet& ps) {
        return conditional
                   ? gradient_shift_conditional(circuit, ps, component_targets, kernel, split)
                   : gradient_shift(circuit, ps, target, kernel, split);
    };
    const auto exact_fd = [&](const ParameterSet& ps) {
        return conditional ? gradient_fd_conditional(circuit, ps, component_targets, kernel,
                                                     split, kFdProbe)
                           : gradient_fd(circuit, ps, target, kernel, split, kFdProbe);
    };

    // Probe once whether the shift rule matches finite differences here;
    // slots that disagree are driven by finite differences for the run.
    std::vector<bool> fd_slot(work.vec(vec).size(), false);
    int fd_count = 0;
    if (exact && !occurrences.empty()) {
        const LossValue s = exact_shift(work);
        const LossValue f = exact_fd(work);
        for (std::size_t k = 0; k < fd_slot.size(); ++k) {
            if (std::abs(s.gradient[k] - f.gradient[k]) > kShiftFdTol) {
                fd_slot[k] = true;
                ++fd_count;
            }
        }
    }

    const auto evaluate_loss = [&](const ParameterSet& ps, int iter) {
        if (!exact) {
            return shot_gradient(circuit, ps, target, component_targets, kernel, split, vec,
                                 config.shots, config.seed, static_cast<std::uint64_t>(iter));
        }
        LossValue lv = exact_shift(ps);
        if (fd_count > 0) {
            const LossValue f = exact_fd(ps);
            for (std::size_t k = 0; k < fd_slot.size(); ++k) {
                if (fd_slot[k]) lv.gradient[k] = f.gradient[k];
            }
        }
        return lv;
    };

    TrainReport report;
    std::vector<double> adam_m(work.vec(vec).size(), 0.0);
    std::vector<double> adam_v(work.vec(vec).size(), 0.0);
    int adam_t = 0;

    for (int iter = 0; iter < config.max_iters; ++iter) {
        const LossValue lv = evaluate_loss(work, iter);
        if (!std::isfinite(lv.value)) {
            throw numerical_error("train: loss is not finite at iteration " +
                                  std::to_string(iter));
        }
        report.loss_history.push_back(lv.value);
        if (lv.value <= config.tolerance) {
            report.converged = true;
            break;
        }
        for (double g : lv.gradient) {
            if (!std::isfinite(g)) {
                throw numerical_error("train: gradient is not finite at iteration " +
                                      std::to_string(iter));
            }
        }
        std::vector<double>& x = work.vec(vec);
        if (config.optimizer == OptimizerKind::Adam) {
            ++adam_t;
            const double c1 = 1.0 - std::pow(config.adam_beta1, adam_t);
            const double c2 = 1.0 - std::pow(config.adam_beta2, adam_t);
            for (std::size_t k = 0; k < x.size(); ++k) {
                const double g = lv.gradient[k];
                adam_m[k] = config.adam_beta1 * adam_m[k] + (1.0 - config.adam_beta1) * g;
                adam_v[k] = config.adam_beta2 * adam_v[k] + (1.0 - config.adam_beta2) * g * g;
                x[k] -= config.learning_rate * (adam_m[k] / c1) /
                        (std::sqrt(adam_v[k] / c2) + kAdamEps);
            }
        } else {
            for (std::size_t k = 0; k < x.size(); ++k) {
                x[k] -= config.learning_rate * lv.gradient[k];
            }
        }
    }

    report.final_params = work;
    const StateVector final_state = run(circuit, work);
    report.final_data_marginal = data_marginal(final_state, split);
    if (split.m >= 1) report.final_prior = prior(final_state, split);
    report.metrics = evaluate(circuit, work, split, target, config.shots,
                              derive_seed(config.seed, 0xE7A1u, 0));
    report.metrics["iterations"] = static_cast<double>(report.loss_history.size());
    report.metrics["final_loss"] = report.loss_history.back();
    report.metrics["converged"] = report.converged ? 1.0 : 0.0;
    report.metrics["fd_fallback_slots"] = static_cast<double>(fd_count);
    return report;
}

PretrainResult pretrain_likelihood(const AnsatzLayout& layout,
                                   const std::vector<DiscreteDistribution>& component_targets,
                                   const TrainConfig& config) {
    layout.validate();
    if (static_cast<int>(component_targets.size()) != layout.num_latents) {
        throw std::invalid_argument("pretrain_likelihood: need one target per latent state");
    }
    const Circuit like = build_likelihood_ansatz(layout);
    const RegisterSplit split{layout.n, layout.m};

    PretrainResult result;
    result.params.theta.assign(static_cast<std::size_t>(like.slot_count(ParamVector::Theta)),
                               0.0);
    result.params.gamma_frozen = true;
    {
        std::mt19937_64 rng(config.seed);
        for (double& v : result.params.theta) {
            v = (2.0 * uniform53(rng) - 1.0) * config.init_scale;
        }
    }
    result.component_tv.resize(component_targets.size(), 0.0);

    for (int i = 0; i < layout.num_latents; ++i) {
        // Clamp the ancilla register to |lambda_i> for this fitting pass.
        Circuit clamped{layout.n, layout.m, {}};
        for (int j = 0; j < layout.m; ++j) {
            if ((i >> (layout.m - 1 - j)) & 1) clamped.add(GateSpec::x(layout.n + j));
        }
        clamped.append(like);

        TrainConfig pass = config;
        pass.mode = TrainMode::LearnTheta;
        pass.warm_start = true;
        pass.seed = derive_seed(config.seed, 0x9Du, static_cast<std::uint64_t>(i));

        ParameterSet pass_params = result.params;
        pass_params.gamma_frozen = true;
        pass_params.theta_frozen = false;

        const TrainReport rep =
            train(clamped, pass_params, component_targets[static_cast<std::size_t>(i)], pass,
                  split);
        result.params.theta = rep.final_params.theta;
        result.component_tv[static_cast<std::size_t>(i)] = total_variation(
            rep.final_data_marginal, component_targets[static_cast<std::size_t>(i)]);
    }

    result.params.theta_frozen = true;
    return result;
}

std::map<std::string, double> evaluate(const Circuit& circuit, const ParameterSet& params,
                                       const RegisterSplit& split,
                                       const DiscreteDistribution& target, std::int64_t shots,
                                       std::uint64_t seed) {
    const StateVector state = run(circuit, params);
    const DiscreteDistribution p = data_marginal(state, split);
    if (p.probs.size() != target.probs.size()) {
        throw std::invalid_argument("evaluate: target must cover the data register");
    }

    std::map<std::string, double> metrics;
    double valid = 0.0;
    for (std::size_t i = 0; i < p.probs.size(); ++i) {
        if (target.probs[i] > 0.0) valid += p.probs[i];
    }
    metrics["valid_mass"] = valid;
    metrics["total_variation"] = total_variation(p, target);
    if (split.m >= 1) {
        const DiscreteDistribution w = prior(state, split);
        for (std::size_t i = 0; i < w.probs.size(); ++i) {
            metrics["prior_" + std::to_string(i)] = w.probs[i];
        }
    }

    if (shots != kExactShots) {
        if (shots < 1) throw std::invalid_argument("evaluate: shots must be EXACT or >= 1");
        const ShotResult sr = state.sample(static_cast<std::uint64_t>(shots), seed);
        const DiscreteDistribution ej = empirical_distribution(sr, state.dim());
        const DiscreteDistribution ep = data_marginal_of_joint(ej, split);
        double evalid = 0.0;
        for (std::size_t i = 0; i < ep.probs.size(); ++i) {
            if (target.probs[i] > 0.0) evalid += ep.probs[i];
        }
        metrics["empirical_valid_mass"] = evalid;
        metrics["empirical_total_variation"] = total_variation(ep, target);
        if (split.m >= 1) {
            const DiscreteDistribution ew = prior_of_joint(ej, split);
            for (std::size_t i = 0; i < ew.probs.size(); ++i) {
                metrics["empirical_prior_" + std::to_string(i)] = ew.probs[i];
            }
        }
    }
    return metrics;
}

}  // namespace bqc
