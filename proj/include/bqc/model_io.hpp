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

#include <filesystem>
#include <stdexcept>
#include <string>

#include "bqc/circuit.hpp"

namespace bqc {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A trained model on disk: the gate list in the circuit text format, the
/// bound parameters, and the ansatz layout it was built from.
struct ModelFile {
    int format_version = 1;
    Circuit circuit;
    ParameterSet params;
    AnsatzLayout layout;
};

void write_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile read_model(const std::filesystem::path& path);

/// Writes text to path, throwing io_error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace bqc
