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

#include "bqc/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bqc {

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw io_error("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path.string() + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw io_error("read failed for '" + path.string() + "'");
    return buf.str();
}

void write_model(const std::filesystem::path& path, const ModelFile& model) {
    nlohmann::json j;
    j["format_version"] = model.format_version;
    j["n"] = model.circuit.num_data_qubits;
    j["m"] = model.circuit.num_ancilla_qubits;
    j["layout"] = {
        {"num_latents", model.layout.num_latents},
        {"prior_layers", model.layout.prior_layers},
        {"likelihood_layers", model.layout.likelihood_layers},
        {"control_style", model.layout.control_style == ControlStyle::PerLatentState
                              ? "PER_LATENT_STATE"
                              : "PER_ANCILLA_QUBIT"},
    };
    j["circuit"] = print_circuit(model.circuit);
    j["gamma"] = model.params.gamma;
    j["theta"] = model.params.theta;
    j["gamma_frozen"] = model.params.gamma_frozen;
    j["theta_frozen"] = model.params.theta_frozen;
    write_text_file(path, j.dump(2) + "\n");
}

ModelFile read_model(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw io_error("model file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    try {
        ModelFile model;
        model.format_version = j.at("format_version").get<int>();
        if (model.format_version != 1) {
            throw io_error("model file '" + path.string() + "' has unsupported format_version");
        }
        const int n = j.at("n").get<int>();
        const int m = j.at("m").get<int>();
        model.circuit = parse_circuit(j.at("circuit").get<std::string>(), n, m);
        model.params.gamma = j.at("gamma").get<std::vector<double>>();
        model.params.theta = j.at("theta").get<std::vector<double>>();
        model.params.gamma_frozen = j.at("gamma_frozen").get<bool>();
        model.params.theta_frozen = j.at("theta_frozen").get<bool>();
        const nlohmann::json& layout = j.at("layout");
        model.layout.n = n;
        model.layout.m = m;
        model.layout.num_latents = layout.at("num_latents").get<int>();
        model.layout.prior_layers = layout.at("prior_layers").get<int>();
        model.layout.likelihood_layers = layout.at("likelihood_layers").get<int>();
        model.layout.control_style =
            layout.at("control_style").get<std::string>() == "PER_ANCILLA_QUBIT"
                ? ControlStyle::PerAncillaQubit
                : ControlStyle::PerLatentState;
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw io_error("model file '" + path.string() + "' is malformed: " + e.what());
    }
}

}  // namespace bqc
