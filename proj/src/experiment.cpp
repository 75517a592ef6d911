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

#include "bqc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include <json.hpp>

#include "bqc/model_io.hpp"

namespace bqc {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::string& where,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional) {
    if (!j.is_object()) throw config_error("'" + where + "' must be a JSON object");
    for (const std::string& key : required) {
        if (!j.contains(key)) {
            throw config_error("missing required key '" + key + "' in '" + where + "'");
        }
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        const bool known =
            std::find(required.begin(), required.end(), key) != required.end() ||
            std::find(optional.begin(), optional.end(), key) != optional.end();
        if (!known) throw config_error("unknown key '" + key + "' in '" + where + "'");
    }
}

template <typename T>
T get_as(const json& j, const std::string& where, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error("key '" + key + "' in '" + where + "' has the wrong type");
    }
}

KernelSpec parse_kernel(const json& j) {
    require_keys(j, "kernel", {}, {"bandwidths", "distance"});
    KernelSpec spec;
    if (j.contains("bandwidths")) {
        spec.bandwidths = get_as<std::vector<double>>(j, "kernel", "bandwidths");
    }
    if (j.contains("distance")) {
        const std::string d = get_as<std::string>(j, "kernel", "distance");
        if (d == "INDEX") {
            spec.distance = KernelDistance::Index;
        } else if (d == "HAMMING") {
            spec.distance = KernelDistance::Hamming;
        } else {
            throw config_error("kernel distance must be INDEX or HAMMING, got '" + d + "'");
        }
    }
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw config_error(e.what());
    }
    return spec;
}

TrainConfig parse_train(const json& j, const std::string& where, TrainMode expected_mode) {
    require_keys(j, where, {},
                 {"mode", "max_iters", "tolerance", "learning_rate", "optimizer", "shots",
                  "seed", "kernel", "init_scale", "adam_beta1", "adam_beta2"});
    TrainConfig cfg;
    cfg.mode = expected_mode;
    if (j.contains("mode")) {
        const std::string mode = get_as<std::string>(j, where, "mode");
        const std::string want =
            expected_mode == TrainMode::LearnTheta ? "LEARN_THETA" : "LEARN_GAMMA";
        if (mode != want) {
            throw config_error("key 'mode' in '" + where + "' must be " + want +
                               " for this experiment");
        }
    }
    if (j.contains("max_iters")) cfg.max_iters = get_as<int>(j, where, "max_iters");
    if (j.contains("tolerance")) cfg.tolerance = get_as<double>(j, where, "tolerance");
    if (j.contains("learning_rate")) {
        cfg.learning_rate = get_as<double>(j, where, "learning_rate");
    }
    if (j.contains("optimizer")) {
        const std::string opt = get_as<std::string>(j, where, "optimizer");
        if (opt == "SGD") {
            cfg.optimizer = OptimizerKind::Sgd;
        } else if (opt == "ADAM") {
            cfg.optimizer = OptimizerKind::Adam;
        } else {
            throw config_error("optimizer must be SGD or ADAM, got '" + opt + "'");
        }
    }
    if (j.contains("shots")) {
        const json& s = j.at("shots");
        if (s.is_string() && s.get<std::string>() == "EXACT") {
            cfg.shots = kExactShots;
        } else if (s.is_number_integer() && s.get<std::int64_t>() >= 1) {
            cfg.shots = s.get<std::int64_t>();
        } else {
            throw config_error("key 'shots' in '" + where + "' must be \"EXACT\" or >= 1");
        }
    }
    if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, where, "seed");
    if (j.contains("kernel")) cfg.kernel = parse_kernel(j.at("kernel"));
    if (j.contains("init_scale")) cfg.init_scale = get_as<double>(j, where, "init_scale");
    if (j.contains("adam_beta1")) cfg.adam_beta1 = get_as<double>(j, where, "adam_beta1");
    if (j.contains("adam_beta2")) cfg.adam_beta2 = get_as<double>(j, where, "adam_beta2");
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw config_error(std::string(e.what()) + " (in '" + where + "')");
    }
    return cfg;
}

AnsatzLayout parse_layout(const json& j, ExperimentKind kind) {
    AnsatzLayout layout;
    if (kind == ExperimentKind::QcbmBaseline) {
        require_keys(j, "layout", {"n", "likelihood_layers"}, {"m", "num_latents"});
        layout.n = get_as<int>(j, "layout", "n");
        layout.m = 0;
        layout.num_latents = 1;
        layout.likelihood_layers = get_as<int>(j, "layout", "likelihood_layers");
        if (j.contains("m") && get_as<int>(j, "layout", "m") != 0) {
            throw config_error("key 'm' in 'layout' must be 0 for QCBM_BASELINE");
        }
        return layout;
    }
    require_keys(j, "layout", {"n", "m", "num_latents", "likelihood_layers"},
                 {"prior_layers", "control_style"});
    layout.n = get_as<int>(j, "layout", "n");
    layout.m = get_as<int>(j, "layout", "m");
    layout.num_latents = get_as<int>(j, "layout", "num_latents");
    layout.likelihood_layers = get_as<int>(j, "layout", "likelihood_layers");
    if (j.contains("prior_layers")) {
        layout.prior_layers = get_as<int>(j, "layout", "prior_layers");
    }
    if (j.contains("control_style")) {
        const std::string style = get_as<std::string>(j, "layout", "control_style");
        if (style == "PER_LATENT_STATE") {
            layout.control_style = ControlStyle::PerLatentState;
        } else if (style == "PER_ANCILLA_QUBIT") {
            layout.control_style = ControlStyle::PerAncillaQubit;
        } else {
            throw config_error("control_style must be PER_LATENT_STATE or PER_ANCILLA_QUBIT");
        }
    }
    try {
        layout.validate();
    } catch (const std::exception& e) {
        throw config_error(e.what());
    }
    return layout;
}

BasGrid parse_grid(const json& j) {
    require_keys(j, "grid", {"rows", "cols"}, {});
    BasGrid grid{get_as<int>(j, "grid", "rows"), get_as<int>(j, "grid", "cols")};
    try {
        grid.validate();
    } catch (const std::exception& e) {
        throw config_error(e.what());
    }
    return grid;
}

MixtureSpec parse_mixture(const json& j, int n) {
    require_keys(j, "mixture", {"components"}, {});
    MixtureSpec spec;
    const json& comps = j.at("components");
    if (!comps.is_array() || comps.empty()) {
        throw config_error("'mixture.components' must be a nonempty array");
    }
    for (const json& c : comps) {
        require_keys(c, "mixture.components[]", {"weight", "mean", "sigma"}, {});
        MixtureComponent mc;
        mc.weight = get_as<double>(c, "mixture.components[]", "weight");
        mc.gaussian.mean = get_as<double>(c, "mixture.components[]", "mean");
        mc.gaussian.sigma = get_as<double>(c, "mixture.components[]", "sigma");
        mc.gaussian.num_qubits = n;
        spec.components.push_back(mc);
    }
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw config_error(e.what());
    }
    return spec;
}

json kernel_json(const KernelSpec& spec) {
    json j;
    j["bandwidths"] = spec.bandwidths;
    j["distance"] = spec.distance == KernelDistance::Index ? "INDEX" : "HAMMING";
    return j;
}

json train_json(const TrainConfig& cfg) {
    json j;
    j["mode"] = cfg.mode == TrainMode::LearnTheta ? "LEARN_THETA" : "LEARN_GAMMA";
    j["max_iters"] = cfg.max_iters;
    j["tolerance"] = cfg.tolerance;
    j["learning_rate"] = cfg.learning_rate;
    j["optimizer"] = cfg.optimizer == OptimizerKind::Adam ? "ADAM" : "SGD";
    if (cfg.shots == kExactShots) {
        j["shots"] = "EXACT";
    } else {
        j["shots"] = cfg.shots;
    }
    j["seed"] = cfg.seed;
    j["kernel"] = kernel_json(cfg.kernel);
    j["init_scale"] = cfg.init_scale;
    j["adam_beta1"] = cfg.adam_beta1;
    j["adam_beta2"] = cfg.adam_beta2;
    return j;
}

std::filesystem::path prepare_output_dir(const std::string& dir) {
    if (dir.empty()) throw config_error("missing required key 'output_dir'");
    std::filesystem::path path(dir);
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw io_error("cannot create output directory '" + dir + "': " + ec.message());
    return path;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::BasGenerate: return "BAS_GENERATE";
        case ExperimentKind::LearnPrior: return "LEARN_PRIOR";
        case ExperimentKind::QcbmBaseline: return "QCBM_BASELINE";
    }
    throw config_error("unknown experiment kind");
}

std::string csv_double(double value) {
    // Fixed scientific form: always 16 significant digits.
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15e", value);
    return buf;
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    require_keys(j, "config", {"experiment", "layout", "dataset", "train", "output_dir"},
                 {"pretrain"});

    ExperimentConfig cfg;
    const std::string kind = get_as<std::string>(j, "config", "experiment");
    if (kind == "BAS_GENERATE") {
        cfg.experiment = ExperimentKind::BasGenerate;
    } else if (kind == "LEARN_PRIOR") {
        cfg.experiment = ExperimentKind::LearnPrior;
    } else if (kind == "QCBM_BASELINE") {
        cfg.experiment = ExperimentKind::QcbmBaseline;
    } else {
        throw config_error("experiment must be BAS_GENERATE, LEARN_PRIOR or QCBM_BASELINE, "
                           "got '" + kind + "'");
    }

    cfg.layout = parse_layout(j.at("layout"), cfg.experiment);

    const json& dataset = j.at("dataset");
    if (cfg.experiment == ExperimentKind::LearnPrior) {
        require_keys(dataset, "dataset", {"mixture"}, {});
        cfg.mixture = parse_mixture(dataset.at("mixture"), cfg.layout.n);
        if (static_cast<int>(cfg.mixture->components.size()) != cfg.layout.num_latents) {
            throw config_error("'mixture.components' must list one component per latent "
                               "(num_latents = " + std::to_string(cfg.layout.num_latents) +
                               ")");
        }
    } else {
        require_keys(dataset, "dataset", {"grid"}, {});
        cfg.grid = parse_grid(dataset.at("grid"));
        if (cfg.grid->num_pixels() != cfg.layout.n) {
            throw config_error("'layout.n' must equal grid rows*cols (" +
                               std::to_string(cfg.grid->num_pixels()) + ")");
        }
        if (cfg.experiment == ExperimentKind::BasGenerate) {
            const auto patterns = bas_patterns(*cfg.grid);
            if (static_cast<int>(patterns.size()) != cfg.layout.num_latents) {
                throw config_error(
                    "'layout.num_latents' must equal the BAS pattern count (" +
                    std::to_string(patterns.size()) + ")");
            }
        }
    }

    const TrainMode mode = cfg.experiment == ExperimentKind::LearnPrior
                               ? TrainMode::LearnGamma
                               : TrainMode::LearnTheta;
    cfg.train = parse_train(j.at("train"), "train", mode);

    cfg.pretrain = cfg.train;
    cfg.pretrain.mode = TrainMode::LearnTheta;
    cfg.pretrain.shots = kExactShots;
    if (j.contains("pretrain")) {
        if (cfg.experiment != ExperimentKind::LearnPrior) {
            throw config_error("key 'pretrain' is only valid for LEARN_PRIOR");
        }
        cfg.pretrain = parse_train(j.at("pretrain"), "pretrain", TrainMode::LearnTheta);
        // The likelihood is treated as given; its fit always reads exact
        // probabilities.
        cfg.pretrain.shots = kExactShots;
    }

    cfg.output_dir = get_as<std::string>(j, "config", "output_dir");
    if (cfg.output_dir.empty()) throw config_error("'output_dir' must not be empty");
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    return parse_experiment_config(read_text_file(path));
}

std::string resolved_config_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = to_string(cfg.experiment);

    json layout;
    layout["n"] = cfg.layout.n;
    if (cfg.experiment == ExperimentKind::QcbmBaseline) {
        layout["likelihood_layers"] = cfg.layout.likelihood_layers;
    } else {
        layout["m"] = cfg.layout.m;
        layout["num_latents"] = cfg.layout.num_latents;
        layout["prior_layers"] = cfg.layout.prior_layers;
        layout["likelihood_layers"] = cfg.layout.likelihood_layers;
        layout["control_style"] = cfg.layout.control_style == ControlStyle::PerLatentState
                                      ? "PER_LATENT_STATE"
                                      : "PER_ANCILLA_QUBIT";
    }
    j["layout"] = layout;

    json dataset;
    if (cfg.mixture) {
        json comps = json::array();
        for (const MixtureComponent& c : cfg.mixture->components) {
            comps.push_back({{"weight", c.weight},
                             {"mean", c.gaussian.mean},
                             {"sigma", c.gaussian.sigma}});
        }
        dataset["mixture"] = {{"components", comps}};
    } else if (cfg.grid) {
        dataset["grid"] = {{"rows", cfg.grid->rows}, {"cols", cfg.grid->cols}};
    }
    j["dataset"] = dataset;

    j["train"] = train_json(cfg.train);
    if (cfg.experiment == ExperimentKind::LearnPrior) j["pretrain"] = train_json(cfg.pretrain);
    j["output_dir"] = cfg.output_dir;
    return j.dump(2) + "\n";
}

namespace {

struct BuiltExperiment {
    Circuit circuit;
    ParameterSet params;
    RegisterSplit split;
    DiscreteDistribution target;
    std::vector<DiscreteDistribution> component_targets;
    std::vector<double> pretrain_tv;
};

BuiltExperiment build_experiment(const ExperimentConfig& cfg) {
    BuiltExperiment built;
    switch (cfg.experiment) {
        case ExperimentKind::BasGenerate: {
            const std::vector<BasisIndex> patterns = bas_patterns(*cfg.grid);
            const int k = static_cast<int>(patterns.size());
            built.split = {cfg.layout.n, cfg.layout.m};
            built.target = bas_target(*cfg.grid);

            const std::vector<double> uniform_prior(
                static_cast<std::size_t>(k), 1.0 / static_cast<double>(k));
            built.circuit =
                embed_on_ancillas(build_prior_exact(uniform_prior, cfg.layout.m), cfg.layout.n);
            built.circuit.append(build_likelihood_ansatz(cfg.layout));

            // Joint-target mode: latent i is bound to the i-th BAS pattern.
            for (BasisIndex p : patterns) {
                built.component_targets.push_back(
                    delta_distribution(built.split.data_size(), p));
            }
            built.params.gamma_frozen = true;
            built.params.theta.assign(
                static_cast<std::size_t>(built.circuit.slot_count(ParamVector::Theta)), 0.0);
            return built;
        }
        case ExperimentKind::QcbmBaseline: {
            built.split = {cfg.layout.n, 0};
            built.target = bas_target(*cfg.grid);
            built.circuit = build_qcbm_baseline(cfg.layout.n, cfg.layout.likelihood_layers);
            built.params.gamma_frozen = true;
            built.params.theta.assign(
                static_cast<std::size_t>(built.circuit.slot_count(ParamVector::Theta)), 0.0);
            return built;
        }
        case ExperimentKind::LearnPrior: {
            built.split = {cfg.layout.n, cfg.layout.m};
            built.target = mixture_target(*cfg.mixture);

            std::vector<DiscreteDistribution> components;
            for (const MixtureComponent& c : cfg.mixture->components) {
                components.push_back(discretized_gaussian(c.gaussian));
            }
            const PretrainResult pre =
                pretrain_likelihood(cfg.layout, components, cfg.pretrain);
            built.pretrain_tv = pre.component_tv;

            built.circuit = build_prior_ansatz(cfg.layout);
            built.circuit.append(build_likelihood_ansatz(cfg.layout));
            built.params.theta = pre.params.theta;
            built.params.theta_frozen = true;
            built.params.gamma.assign(
                static_cast<std::size_t>(built.circuit.slot_count(ParamVector::Gamma)), 0.0);
            return built;
        }
    }
    throw config_error("unknown experiment kind");
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& cfg) {
    const std::filesystem::path dir = prepare_output_dir(cfg.output_dir);

    RunArtifacts artifacts;
    artifacts.resolved_config_file = dir / "resolved_config.json";
    artifacts.loss_history_csv = dir / "loss_history.csv";
    artifacts.distribution_csv = dir / "distribution.csv";
    artifacts.target_csv = dir / "target.csv";
    artifacts.report_file = dir / "report.json";
    artifacts.model_file = dir / "model.json";

    write_text_file(artifacts.resolved_config_file, resolved_config_json(cfg));

    const auto start = std::chrono::steady_clock::now();
    BuiltExperiment built = build_experiment(cfg);
    artifacts.report = train(built.circuit, built.params, built.target, cfg.train, built.split,
                             built.component_targets);
    const double wall_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();

    std::string loss_csv = "iteration,loss\n";
    for (std::size_t i = 0; i < artifacts.report.loss_history.size(); ++i) {
        loss_csv += std::to_string(i) + ',' + csv_double(artifacts.report.loss_history[i]) +
                    '\n';
    }
    write_text_file(artifacts.loss_history_csv, loss_csv);

    const auto distribution_csv = [](const DiscreteDistribution& d) {
        std::string csv = "index,probability\n";
        for (std::size_t i = 0; i < d.probs.size(); ++i) {
            csv += std::to_string(i) + ',' + csv_double(d.probs[i]) + '\n';
        }
        return csv;
    };
    write_text_file(artifacts.distribution_csv,
                    distribution_csv(artifacts.report.final_data_marginal));
    write_text_file(artifacts.target_csv, distribution_csv(built.target));

    ModelFile model;
    model.circuit = built.circuit;
    model.params = artifacts.report.final_params;
    model.layout = cfg.layout;
    write_model(artifacts.model_file, model);

    json report;
    report["experiment"] = to_string(cfg.experiment);
    report["iterations"] = artifacts.report.loss_history.size();
    report["final_loss"] = artifacts.report.loss_history.back();
    report["converged"] = artifacts.report.converged;
    report["wall_ms"] = wall_ms;
    report["metrics"] = artifacts.report.metrics;
    if (!built.pretrain_tv.empty()) report["pretrain_component_tv"] = built.pretrain_tv;
    write_text_file(artifacts.report_file, report.dump(2) + "\n");

    return artifacts;
}

}  // namespace bqc
