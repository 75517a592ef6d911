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
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line
// with its measured values; the process exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bqc/datasets.hpp"
#include "bqc/experiment.hpp"
#include "bqc/loss.hpp"
#include "bqc/model_io.hpp"
#include "bqc/probability.hpp"
#include "bqc/trainer.hpp"

namespace fs = std::filesystem;
using namespace bqc;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

fs::path out_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "bqcsim_acceptance" / name;
    fs::create_directories(dir);
    return dir;
}

ExperimentConfig load_bundled(const std::string& file, const std::string& run_name,
                              std::uint64_t seed_override = 0, bool override_seed = false) {
    ExperimentConfig config =
        load_experiment_config(fs::path(BQC_CONFIG_DIR) / file);
    config.output_dir = out_dir(run_name).string();
    if (override_seed) config.train.seed = seed_override;
    return config;
}

// Experiment runs shared between criteria (criterion 3 reuses criterion 2's
// seed); keyed by config file + seed.
std::map<std::string, RunArtifacts>& run_cache() {
    static std::map<std::string, RunArtifacts> cache;
    return cache;
}

const RunArtifacts& cached_run(const std::string& file, std::uint64_t seed) {
    const std::string key = file + "#" + std::to_string(seed);
    auto it = run_cache().find(key);
    if (it == run_cache().end()) {
        const ExperimentConfig config = load_bundled(file, key, seed, true);
        it = run_cache().emplace(key, run_experiment(config)).first;
    }
    return it->second;
}

double uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_angle(std::mt19937_64& rng) { return (2.0 * uniform(rng) - 1.0) * kPi; }

StateVector random_state(int num_qubits, std::mt19937_64& rng) {
    StateVector state(num_qubits);
    double norm = 0.0;
    for (Complex& a : state.amplitudes()) {
        const double u1 = std::max(uniform(rng), 1e-300);
        const double u2 = uniform(rng);
        const double r = std::sqrt(-2.0 * std::log(u1));
        a = Complex{r * std::cos(2 * kPi * u2), r * std::sin(2 * kPi * u2)};
        norm += std::norm(a);
    }
    for (Complex& a : state.amplitudes()) a /= std::sqrt(norm);
    return state;
}

double max_diff_up_to_phase(const std::vector<Complex>& a, const std::vector<Complex>& b) {
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

double sample_variance(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(xs.size() - 1);
}

// --- criterion 1: 2x2 BAS generation -------------------------------------

Outcome criterion_1() {
    const double start = now_seconds();
    const RunArtifacts& run = cached_run("bas2x2.json", 7);
    const double seconds = now_seconds() - start;
    const double valid = run.report.metrics.at("valid_mass");
    const double tv = run.report.metrics.at("total_variation");
    const std::size_t iters = run.report.loss_history.size();

    // Downstream model-file checks: a million-shot sample concentrates on
    // the six BAS integers, and the all-ones image posteriors onto its
    // bound latent.
    const ModelFile model = read_model(run.model_file);
    const StateVector state = bqc::run(model.circuit, model.params);
    const ShotResult shots = state.sample(1000000, 42);
    const std::vector<BasisIndex> patterns = bas_patterns({2, 2});
    std::uint64_t on_patterns = 0;
    for (const auto& [outcome, count] : shots.counts) {
        const BasisIndex data = outcome >> model.circuit.num_ancilla_qubits;
        for (BasisIndex p : patterns) {
            if (data == p) {
                on_patterns += count;
                break;
            }
        }
    }
    const double sampled_valid = static_cast<double>(on_patterns) / 1e6;

    const DiscreteDistribution post = posterior(state, {4, 3}, 15);
    const double all_ones_latent = post.probs[5];  // pattern 15 is latent 5

    Outcome o;
    o.pass = valid >= 0.99 && tv <= 0.05 && iters <= 3000 && seconds <= 60.0 &&
             sampled_valid >= 0.99 && all_ones_latent >= 0.99;
    o.detail = "valid_mass=" + fmt(valid) + " (>=0.99), tv=" + fmt(tv) +
               " (<=0.05), iters=" + std::to_string(iters) + " (<=3000), " +
               fmt(seconds) + "s (<=60s), 10^6-shot valid=" + fmt(sampled_valid) +
               ", posterior(latent|x=15)=" + fmt(all_ones_latent);
    return o;
}

// --- criterion 2: 3x3 BAS generation -------------------------------------

Outcome criterion_2() {
    const double start = now_seconds();
    const RunArtifacts& run = cached_run("bas3x3.json", 7);
    const double seconds = now_seconds() - start;
    const double valid = run.report.metrics.at("valid_mass");

    const std::vector<BasisIndex> patterns = bas_patterns({3, 3});
    int within = 0;
    for (BasisIndex p : patterns) {
        if (std::abs(run.report.final_data_marginal.probs[p] - 1.0 / 14.0) <= 0.03) {
            ++within;
        }
    }

    Outcome o;
    o.pass = valid >= 0.85 && within >= 10 && seconds <= 900.0;
    o.detail = "valid_mass=" + fmt(valid) + " (>=0.85), " + std::to_string(within) +
               "/14 patterns within +-0.03 of 1/14 (>=10), " + fmt(seconds) +
               "s (<=900s)";
    return o;
}

// --- criterion 3: QCBM baseline stays below BQC on 3x3 -------------------

Outcome criterion_3() {
    const std::vector<std::uint64_t> seeds = {1, 7, 42};
    double bqc_min = 1.0, qcbm_max = 0.0;
    for (std::uint64_t seed : seeds) {
        bqc_min = std::min(bqc_min,
                           cached_run("bas3x3.json", seed).report.metrics.at("valid_mass"));
        qcbm_max = std::max(
            qcbm_max, cached_run("qcbm3x3.json", seed).report.metrics.at("valid_mass"));
    }
    Outcome o;
    o.pass = qcbm_max < bqc_min;
    o.detail = "max QCBM valid_mass=" + fmt(qcbm_max) +
               " < min BQC valid_mass=" + fmt(bqc_min) + " over seeds {1,7,42}";
    return o;
}

// --- criterion 4: prior learning in exact mode ---------------------------

Outcome criterion_4() {
    Outcome o;
    std::ostringstream detail;
    const std::pair<const char*, double> cases[2] = {{"prior_70_30.json", 0.70},
                                                     {"prior_85_15.json", 0.85}};
    for (const auto& [file, target] : cases) {
        const RunArtifacts& run = cached_run(file, 7);
        const double learned = run.report.final_prior.probs[0];
        const bool close = std::abs(learned - target) <= 0.05;

        // Determinism: an identical re-run reproduces the history exactly.
        ExperimentConfig config = load_bundled(file, std::string(file) + "#repeat", 7, true);
        const RunArtifacts repeat = run_experiment(config);
        const bool identical = repeat.report.loss_history == run.report.loss_history &&
                               repeat.report.final_prior.probs == run.report.final_prior.probs;

        o.pass = o.pass && close && identical;
        detail << "target " << target << ": learned=" << fmt(learned)
               << (close ? " (within 0.05)" : " (OUT OF RANGE)")
               << (identical ? ", repeat identical; " : ", repeat DIFFERS; ");
    }
    o.detail = detail.str();
    return o;
}

// --- criterion 5: shot-noise ordering ------------------------------------

Outcome criterion_5() {
    // The two bundled shot-mode configs share the exact likelihood
    // pretraining; only the gamma stage is repeated per seed. SGD carries
    // the shot noise into the iterate, which is what the variance column
    // measures (ADAM's normalized steps would mask the shot count).
    const ExperimentConfig cfg200 = load_bundled("prior_70_30_shots200.json", "c5_200");
    const ExperimentConfig cfg1000 = load_bundled("prior_70_30_shots1000.json", "c5_1000");

    std::vector<DiscreteDistribution> components;
    for (const MixtureComponent& c : cfg200.mixture->components) {
        components.push_back(discretized_gaussian(c.gaussian));
    }
    const PretrainResult pre =
        pretrain_likelihood(cfg200.layout, components, cfg200.pretrain);

    Circuit circuit = build_prior_ansatz(cfg200.layout);
    circuit.append(build_likelihood_ansatz(cfg200.layout));
    const RegisterSplit split{cfg200.layout.n, cfg200.layout.m};
    const DiscreteDistribution target = mixture_target(*cfg200.mixture);

    ParameterSet params;
    params.theta = pre.params.theta;
    params.theta_frozen = true;
    params.gamma.assign(static_cast<std::size_t>(circuit.slot_count(ParamVector::Gamma)),
                        0.0);

    const auto learned_prior = [&](const TrainConfig& base, std::uint64_t seed) {
        TrainConfig config = base;
        config.seed = seed;
        return train(circuit, params, target, config, split).final_prior.probs[0];
    };

    std::vector<double> at_200, at_1000;
    for (std::uint64_t rep = 1; rep <= 6; ++rep) {
        at_200.push_back(learned_prior(cfg200.train, rep));
        at_1000.push_back(learned_prior(cfg1000.train, rep));
    }
    const double var_200 = sample_variance(at_200);
    const double var_1000 = sample_variance(at_1000);

    Outcome o;
    o.pass = var_1000 <= var_200;
    o.detail = "var(P(lambda_1)) at 1000 shots=" + fmt(var_1000) +
               " <= at 200 shots=" + fmt(var_200) + " (6 runs each)";
    return o;
}

// --- criterion 6: parameter-shift gradients match finite differences ------

Outcome criterion_6() {
    std::mt19937_64 rng(616);
    const KernelSpec kernel;
    double worst = 0.0;
    std::string worst_name = "none";

    struct Instance {
        std::string name;
        Circuit circuit;
        RegisterSplit split;
        bool train_gamma = false;
        std::vector<DiscreteDistribution> components;  // conditional mode if nonempty
    };
    std::vector<Instance> instances;

    {
        // The 2x2 BAS ansatz (7 qubits), marginal and conditional modes.
        const AnsatzLayout layout{4, 3, 6, 1, 2, ControlStyle::PerLatentState};
        Circuit circuit = embed_on_ancillas(
            build_prior_exact(std::vector<double>(6, 1.0 / 6.0), 3), 4);
        circuit.append(build_likelihood_ansatz(layout));
        instances.push_back({"bas2x2/theta", circuit, {4, 3}, false, {}});
        std::vector<DiscreteDistribution> comps;
        for (BasisIndex p : bas_patterns({2, 2})) {
            comps.push_back(delta_distribution(16, p));
        }
        instances.push_back({"bas2x2/conditional", circuit, {4, 3}, false, comps});
    }
    {
        // The prior-learning ansatz (8 qubits), gamma and theta modes.
        const AnsatzLayout layout{7, 1, 2, 1, 4, ControlStyle::PerLatentState};
        Circuit circuit = build_prior_ansatz(layout);
        circuit.append(build_likelihood_ansatz(layout));
        instances.push_back({"prior7q/gamma", circuit, {7, 1}, true, {}});
        instances.push_back({"prior7q/theta", circuit, {7, 1}, false, {}});
    }
    {
        const AnsatzLayout layout{3, 2, 4, 2, 2, ControlStyle::PerAncillaQubit};
        Circuit circuit = build_prior_ansatz(layout);
        circuit.append(build_likelihood_ansatz(layout));
        instances.push_back({"per_ancilla/theta", circuit, {3, 2}, false, {}});
    }
    instances.push_back({"qcbm4q/theta", build_qcbm_baseline(4, 6), {4, 0}, false, {}});

    for (const Instance& inst : instances) {
        const KernelMatrix k = kernel_matrix(kernel, inst.split.data_size());
        for (int draw = 0; draw < 50; ++draw) {
            ParameterSet params;
            params.gamma.assign(
                static_cast<std::size_t>(inst.circuit.slot_count(ParamVector::Gamma)), 0.0);
            params.theta.assign(
                static_cast<std::size_t>(inst.circuit.slot_count(ParamVector::Theta)), 0.0);
            for (double& v : params.gamma) v = uniform_angle(rng);
            for (double& v : params.theta) v = uniform_angle(rng);
            params.gamma_frozen = !inst.train_gamma;
            params.theta_frozen = inst.train_gamma;

            DiscreteDistribution target{
                std::vector<double>(inst.split.data_size(), 0.0)};
            double total = 0.0;
            for (double& p : target.probs) {
                p = uniform(rng);
                total += p;
            }
            for (double& p : target.probs) p /= total;

            LossValue shift, fd;
            if (inst.components.empty()) {
                shift = gradient_shift(inst.circuit, params, target, k, inst.split);
                fd = gradient_fd(inst.circuit, params, target, k, inst.split, 1e-5);
            } else {
                shift = gradient_shift_conditional(inst.circuit, params, inst.components, k,
                                                   inst.split);
                fd = gradient_fd_conditional(inst.circuit, params, inst.components, k,
                                             inst.split, 1e-5);
            }
            for (std::size_t i = 0; i < shift.gradient.size(); ++i) {
                const double diff = std::abs(shift.gradient[i] - fd.gradient[i]);
                if (diff > worst) {
                    worst = diff;
                    worst_name = inst.name;
                }
            }
        }
    }

    Outcome o;
    o.pass = worst <= 1e-6;
    o.detail = "max |shift - fd| = " + fmt(worst) + " (<=1e-6), worst on " + worst_name +
               ", 50 draws per ansatz";
    return o;
}

// --- criterion 7: decomposition equivalence ------------------------------

Outcome criterion_7() {
    std::mt19937_64 rng(717);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 4;
        Circuit circuit{n, 0, {}};
        switch (trial % 4) {
            case 0:
                circuit.add(GateSpec::cry(0, 1 + static_cast<int>(rng() % 3),
                                          uniform_angle(rng)));
                break;
            case 1: circuit.add(GateSpec::toffoli(0, 1, 2)); break;
            case 2:
                circuit.add(GateSpec::multi_ctrl_ry(
                    {0, 1}, {static_cast<int>(rng() % 2), static_cast<int>(rng() % 2)}, 3,
                    uniform_angle(rng)));
                break;
            default:
                circuit.add(GateSpec::multi_ctrl_ry(
                    {0, 1, 2},
                    {static_cast<int>(rng() % 2), static_cast<int>(rng() % 2), 1}, 3,
                    uniform_angle(rng)));
        }
        const Circuit expanded = decompose_circuit(circuit);

        StateVector native = random_state(n, rng);
        StateVector rewritten = native;
        for (const GateSpec& g : circuit.gates) apply_gate(native, g, {});
        for (const GateSpec& g : expanded.gates) apply_gate(rewritten, g, {});
        worst = std::max(worst,
                         max_diff_up_to_phase(native.amplitudes(), rewritten.amplitudes()));
    }
    Outcome o;
    o.pass = worst <= 1e-10;
    o.detail = "max amplitude deviation (up to global phase) = " + fmt(worst) +
               " (<=1e-10) over 200 random states";
    return o;
}

// --- criterion 8: expressivity of product RY vs RY + CNOT ----------------

Outcome criterion_8() {
    double grid_min = 1.0;
    for (int i = 0; i < 100; ++i) {
        for (int j = 0; j < 100; ++j) {
            const double p0 = std::pow(std::cos(kPi * i / 100.0), 2.0);
            const double q0 = std::pow(std::cos(kPi * j / 100.0), 2.0);
            const double tv = 0.5 * (std::abs(p0 * q0 - 0.5) + p0 * (1 - q0) +
                                     (1 - p0) * q0 + std::abs((1 - p0) * (1 - q0) - 0.5));
            grid_min = std::min(grid_min, tv);
        }
    }

    Circuit entangled{2, 0, {}};
    entangled.add(GateSpec::ry(0, kPi / 2));
    entangled.add(GateSpec::cnot(0, 1));
    const double tv_entangled =
        total_variation({run(entangled, {}).probabilities()}, {{0.5, 0.0, 0.0, 0.5}});

    Outcome o;
    o.pass = grid_min >= 0.24 && tv_entangled <= 1e-10;
    o.detail = "product-family grid min TV = " + fmt(grid_min) +
               " (>=0.24) over 10^4 points; RY+CNOT TV = " + fmt(tv_entangled) +
               " (<=1e-10)";
    return o;
}

// --- criterion 9: probability-law suite ----------------------------------

Outcome criterion_9() {
    std::mt19937_64 rng(919);
    double worst_chain = 0.0, worst_bayes = 0.0, worst_norm = 0.0, worst_proj = 0.0;

    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(4 - n));
        const RegisterSplit split{n, m};
        const StateVector state = random_state(n + m, rng);

        const DiscreteDistribution j = joint(state, split);
        const DiscreteDistribution w = prior(state, split);
        const DiscreteDistribution px = data_marginal(state, split);

        double total = 0.0;
        for (double v : w.probs) total += v;
        worst_norm = std::max(worst_norm, std::abs(total - 1.0));
        total = 0.0;
        for (double v : px.probs) total += v;
        worst_norm = std::max(worst_norm, std::abs(total - 1.0));

        for (std::size_t l = 0; l < w.probs.size(); ++l) {
            if (w.probs[l] <= 1e-12) continue;
            const DiscreteDistribution cond = likelihood(state, split, l);
            for (std::size_t x = 0; x < px.probs.size(); ++x) {
                worst_chain = std::max(
                    worst_chain,
                    std::abs(j.probs[(x << m) + l] - w.probs[l] * cond.probs[x]));
                if (px.probs[x] <= 1e-12) continue;
                const DiscreteDistribution post = posterior(state, split, x);
                worst_bayes = std::max(
                    worst_bayes, std::abs(post.probs[l] * px.probs[x] -
                                          cond.probs[x] * w.probs[l]));
            }
        }

        // Projection-operator oracle: explicit dense projector matrix.
        for (std::size_t l = 0; l < w.probs.size(); ++l) {
            std::vector<Complex> projected(state.dim(), Complex{0, 0});
            const std::size_t latent_mask = split.latent_size() - 1;
            for (std::size_t row = 0; row < state.dim(); ++row) {
                for (std::size_t col = 0; col < state.dim(); ++col) {
                    const double entry =
                        (row == col && (row & latent_mask) == l) ? 1.0 : 0.0;
                    projected[row] += entry * state.amplitudes()[col];
                }
            }
            double norm2 = 0.0;
            for (const Complex& a : projected) norm2 += std::norm(a);
            worst_proj = std::max(worst_proj, std::abs(norm2 - w.probs[l]));
        }
    }

    Outcome o;
    o.pass = worst_chain <= 1e-10 && worst_bayes <= 1e-10 && worst_norm <= 1e-9 &&
             worst_proj <= 1e-10;
    o.detail = "chain=" + fmt(worst_chain) + " bayes=" + fmt(worst_bayes) +
               " norm=" + fmt(worst_norm) + " projector=" + fmt(worst_proj) +
               " over 500 random states";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, Outcome (*)()>> criteria = {
        {"2x2 BAS generation", criterion_1},
        {"3x3 BAS generation", criterion_2},
        {"QCBM baseline gap on 3x3", criterion_3},
        {"prior learning, exact mode", criterion_4},
        {"shot-noise ordering", criterion_5},
        {"gradient correctness", criterion_6},
        {"decomposition equivalence", criterion_7},
        {"expressivity of entangled vs product circuits", criterion_8},
        {"probability-law suite", criterion_9},
    };

    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && selected.count(id) == 0) continue;
        const double start = now_seconds();
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double seconds = now_seconds() - start;
        std::printf("[%s] criterion %d: %s (%s) [%.1fs]\n",
                    outcome.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    outcome.detail.c_str(), seconds);
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
