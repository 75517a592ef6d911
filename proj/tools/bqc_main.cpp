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

#include <cmath>
#include <cstdint>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bqc/datasets.hpp"
#include "bqc/experiment.hpp"
#include "bqc/model_io.hpp"
#include "bqc/trainer.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

int cmd_train(const std::string& config_path) {
    const bqc::ExperimentConfig config = bqc::load_experiment_config(config_path);
    const bqc::RunArtifacts artifacts = bqc::run_experiment(config);
    std::cout << "experiment: " << bqc::to_string(config.experiment) << "\n"
              << "iterations: " << artifacts.report.loss_history.size() << "\n"
              << "final loss: " << bqc::csv_double(artifacts.report.loss_history.back())
              << "\n";
    for (const auto& [key, value] : artifacts.report.metrics) {
        std::cout << key << ": " << bqc::csv_double(value) << "\n";
    }
    std::cout << "artifacts: " << artifacts.report_file.parent_path().string() << "\n";
    return kExitOk;
}

int cmd_sample(const std::string& model_path, std::uint64_t shots, std::uint64_t seed,
               const std::string& out_path) {
    const bqc::ModelFile model = bqc::read_model(model_path);
    const bqc::StateVector state = bqc::run(model.circuit, model.params);
    const bqc::ShotResult result = state.sample(shots, seed);

    // Fold joint outcomes down to the data register (the high bits).
    const int m = model.circuit.num_ancilla_qubits;
    const std::size_t data_size = std::size_t{1} << model.circuit.num_data_qubits;
    std::vector<std::uint64_t> counts(data_size, 0);
    for (const auto& [outcome, count] : result.counts) counts[outcome >> m] += count;

    std::string csv = "outcome,count,frequency\n";
    for (std::size_t i = 0; i < data_size; ++i) {
        csv += std::to_string(i) + ',' + std::to_string(counts[i]) + ',' +
               bqc::csv_double(static_cast<double>(counts[i]) / static_cast<double>(shots)) +
               '\n';
    }
    bqc::write_text_file(out_path, csv);
    std::cout << "wrote " << out_path << " (" << shots << " shots)\n";
    return kExitOk;
}

int cmd_inspect(const std::string& model_path, std::int64_t posterior_x) {
    const bqc::ModelFile model = bqc::read_model(model_path);
    const bqc::StateVector state = bqc::run(model.circuit, model.params);
    const bqc::RegisterSplit split{model.circuit.num_data_qubits,
                                   model.circuit.num_ancilla_qubits};

    if (split.m == 0) {
        std::cout << "# model has no ancilla register; data distribution only\n";
        std::cout << "x,probability\n";
        const bqc::DiscreteDistribution p = bqc::data_marginal(state, split);
        for (std::size_t x = 0; x < p.probs.size(); ++x) {
            std::cout << x << ',' << bqc::csv_double(p.probs[x]) << "\n";
        }
        return kExitOk;
    }

    const bqc::DiscreteDistribution w = bqc::prior(state, split);
    std::cout << "# prior P(lambda)\nlambda,probability\n";
    for (std::size_t l = 0; l < w.probs.size(); ++l) {
        std::cout << l << ',' << bqc::csv_double(w.probs[l]) << "\n";
    }

    std::cout << "# likelihood P(x|lambda)\nlambda,x,probability\n";
    for (std::size_t l = 0; l < w.probs.size(); ++l) {
        if (w.probs[l] <= bqc::kConditioningFloor) {
            std::cout << "# lambda " << l << " carries no probability mass; skipped\n";
            continue;
        }
        const bqc::DiscreteDistribution p = bqc::likelihood(state, split, l);
        for (std::size_t x = 0; x < p.probs.size(); ++x) {
            std::cout << l << ',' << x << ',' << bqc::csv_double(p.probs[x]) << "\n";
        }
    }

    if (posterior_x >= 0) {
        const auto x = static_cast<std::size_t>(posterior_x);
        std::cout << "# posterior P(lambda|x=" << x << ")\nlambda,probability\n";
        if (x >= split.data_size()) {
            std::cout << "# x " << x << " outside the data register; skipped\n";
        } else {
            const bqc::DiscreteDistribution p_data = bqc::data_marginal(state, split);
            if (p_data.probs[x] <= bqc::kConditioningFloor) {
                std::cout << "# x " << x << " carries no probability mass; skipped\n";
            } else {
                const bqc::DiscreteDistribution post = bqc::posterior(state, split, x);
                for (std::size_t l = 0; l < post.probs.size(); ++l) {
                    std::cout << l << ',' << bqc::csv_double(post.probs[l]) << "\n";
                }
            }
        }
    }
    return kExitOk;
}

// Fast invariant suite over the core numerics; every check prints one
// PASS/FAIL line.
int cmd_verify() {
    int failures = 0;
    const auto check = [&failures](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS" : "FAIL") << " " << name << "\n";
        if (!ok) ++failures;
    };

    std::mt19937_64 rng(20260808);
    const auto angle = [&rng] {
        return (static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0) * std::numbers::pi;
    };

    // Norm preservation over random 4-qubit circuits.
    {
        bool ok = true;
        for (int trial = 0; trial < 20 && ok; ++trial) {
            bqc::StateVector state(4);
            for (int g = 0; g < 30; ++g) {
                const int q = static_cast<int>(rng() % 4);
                switch (rng() % 4) {
                    case 0: state.apply_single(bqc::gate_ry(angle()), q); break;
                    case 1: state.apply_single(bqc::gate_rx(angle()), q); break;
                    case 2: state.apply_single(bqc::gate_rz(angle()), q); break;
                    default: {
                        const int c = static_cast<int>(rng() % 4);
                        if (c != q) state.apply_controlled(bqc::gate_x(), {{c, 1}}, q);
                    }
                }
            }
            ok = std::abs(state.norm_squared() - 1.0) <= 1e-10;
        }
        check("statevector_norm_preservation", ok);
    }

    // Gate followed by its adjoint restores the state.
    {
        bqc::StateVector state(3);
        state.apply_single(bqc::gate_ry(0.7), 0);
        state.apply_controlled(bqc::gate_ry(1.1), {{0, 1}}, 2);
        const std::vector<bqc::Complex> before = state.amplitudes();
        state.apply_controlled(bqc::gate_ry(0.9), {{0, 1}, {1, 0}}, 2);
        state.apply_controlled(bqc::gate_ry(-0.9), {{0, 1}, {1, 0}}, 2);
        bool ok = true;
        for (std::size_t i = 0; i < before.size(); ++i) {
            ok = ok && std::abs(state.amplitudes()[i] - before[i]) <= 1e-10;
        }
        check("unitary_roundtrip", ok);
    }

    // Parameter-shift gradient matches finite differences on a 3-qubit BQC.
    {
        const bqc::AnsatzLayout layout{2, 1, 2, 1, 1, bqc::ControlStyle::PerLatentState};
        bqc::Circuit circuit = bqc::build_prior_ansatz(layout);
        circuit.append(bqc::build_likelihood_ansatz(layout));
        bqc::ParameterSet params;
        params.gamma = {0.3};
        params.gamma_frozen = true;
        params.theta = {0.8, -0.4, 1.2, 0.5};
        const bqc::RegisterSplit split{2, 1};
        const bqc::DiscreteDistribution target = bqc::uniform_distribution(4);
        const bqc::KernelSpec kernel;
        const bqc::LossValue shift =
            bqc::gradient_shift(circuit, params, target, kernel, split);
        const bqc::LossValue fd =
            bqc::gradient_fd(circuit, params, target, kernel, split, 1e-5);
        bool ok = true;
        for (std::size_t k = 0; k < shift.gradient.size(); ++k) {
            ok = ok && std::abs(shift.gradient[k] - fd.gradient[k]) <= 1e-6;
        }
        check("gradient_shift_vs_fd", ok);
    }

    // Decomposed CRY / Toffoli / multi-controlled RY match the native gates.
    {
        bool ok = true;
        const std::vector<bqc::GateSpec> gates = {
            bqc::GateSpec::cry(0, 2, 0.7),
            bqc::GateSpec::toffoli(0, 1, 2),
            bqc::GateSpec::multi_ctrl_ry({0, 1}, {1, 0}, 2, 1.3),
        };
        for (const bqc::GateSpec& g : gates) {
            bqc::Circuit native{3, 0, {}};
            native.add(g);
            const bqc::Circuit expanded = bqc::decompose_circuit(native);

            bqc::StateVector a(3), b(3);
            for (int q = 0; q < 3; ++q) {
                const double t = angle();
                a.apply_single(bqc::gate_ry(t), q);
                b.apply_single(bqc::gate_ry(t), q);
            }
            for (const bqc::GateSpec& spec : native.gates) bqc::apply_gate(a, spec, {});
            for (const bqc::GateSpec& spec : expanded.gates) bqc::apply_gate(b, spec, {});

            // Align global phase on the largest amplitude.
            std::size_t ref = 0;
            for (std::size_t i = 0; i < a.dim(); ++i) {
                if (std::abs(a.amplitudes()[i]) > std::abs(a.amplitudes()[ref])) ref = i;
            }
            const bqc::Complex phase = a.amplitudes()[ref] / b.amplitudes()[ref];
            for (std::size_t i = 0; i < a.dim(); ++i) {
                ok = ok &&
                     std::abs(a.amplitudes()[i] - phase * b.amplitudes()[i]) <= 1e-10;
            }
        }
        check("decomposition_equivalence", ok);
    }

    // BAS counting law and the exact uniform prior.
    {
        bool ok = true;
        for (int r = 1; r <= 4 && ok; ++r) {
            for (int c = 1; c <= 4 && ok; ++c) {
                const auto patterns = bqc::bas_patterns({r, c});
                ok = static_cast<int>(patterns.size()) == (1 << r) + (1 << c) - 2;
            }
        }
        const bqc::Circuit prep =
            bqc::build_prior_exact(std::vector<double>(6, 1.0 / 6.0), 3);
        const bqc::StateVector state = bqc::run(prep, {});
        const std::vector<double> probs = state.probabilities();
        for (std::size_t i = 0; i < probs.size(); ++i) {
            const double want = i < 6 ? 1.0 / 6.0 : 0.0;
            ok = ok && std::abs(probs[i] - want) <= 1e-10;
        }
        check("bas_counts_and_exact_prior", ok);
    }

    return failures == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian quantum circuit trainer and simulator"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* train = app.add_subcommand("train", "Run an experiment from a JSON config");
    train->add_option("config", config_path, "Experiment config file")->required();

    std::string model_path;
    std::uint64_t shots = 10000;
    std::uint64_t seed = 0;
    std::string out_path = "samples.csv";
    CLI::App* sample = app.add_subcommand("sample", "Sample the data register of a model");
    sample->add_option("model", model_path, "Model file from a train run")->required();
    sample->add_option("--shots", shots, "Number of measurements")->check(CLI::PositiveNumber);
    sample->add_option("--seed", seed, "Sampling seed");
    sample->add_option("--out", out_path, "Output CSV path");

    std::string inspect_model;
    std::int64_t posterior_x = -1;
    CLI::App* inspect =
        app.add_subcommand("inspect", "Print prior, likelihoods and posteriors of a model");
    inspect->add_option("model", inspect_model, "Model file from a train run")->required();
    inspect->add_option("--posterior-x", posterior_x,
                        "Data outcome to condition the posterior on");

    CLI::App* verify = app.add_subcommand("verify", "Run the fast invariant suite");

    try {
        app.parse(argc, argv);
        if (train->parsed()) return cmd_train(config_path);
        if (sample->parsed()) return cmd_sample(model_path, shots, seed, out_path);
        if (inspect->parsed()) return cmd_inspect(inspect_model, posterior_x);
        if (verify->parsed()) return cmd_verify();
        return kExitFailure;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const bqc::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const bqc::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const bqc::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
