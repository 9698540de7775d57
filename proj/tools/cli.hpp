// Copyright 2026 The photonsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "photonsim/interference.hpp"
#include "photonsim/photon_models.hpp"
#include "photonsim/unitary_mesh.hpp"

namespace photonsim::cli {

inline constexpr const char *kVersion = "photonsim 0.1.0";

struct ModelSpec {
    std::string name;
    std::string kind;  // ideal, distinguishable, overlap_uniform, overlap, truncated, marked, circuit_w
    double x = 1.0;
    int k = 0;
    int label = 0;
    std::optional<CMatrix> overlap;
    std::vector<GaussianSpectrum> spectra;
    std::optional<Dispersion> dispersion;
    bool fit = false;
};

struct ExperimentConfig {
    // Exactly one circuit source.
    std::optional<std::pair<int, std::uint64_t>> haar;  // modes, seed
    std::optional<std::filesystem::path> mesh_file;
    std::optional<std::filesystem::path> matrix_file;

    std::optional<InputMixture> input;
    std::vector<ModelSpec> models;
    Normalization normalization = Normalization::renormalized;

    std::size_t samples = 0;
    std::string sample_model;     // defaults to the first model
    std::string reference_model;  // model B of the likelihood curves
    int bootstrap_trials = 100;
    std::map<std::string, std::uint64_t> seeds;  // sample, bootstrap, characterize

    int restarts = 20;
    double x_assumed = 1.0;

    std::filesystem::path output_dir = "out";
    std::string hash;  // FNV-1a of the config text
};

/// Parses and validates a config document. Relative file paths are
/// resolved against `base_dir`. Errors carry the offending field path.
ExperimentConfig parse_config(const std::string &text, const std::filesystem::path &base_dir);

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string &bytes);

/// The config's circuit as a transfer matrix.
TransferMatrix load_circuit(const ExperimentConfig &config);

/// Model to evaluate at the config's input. `x` overrides the overlap of
/// the uniform and truncated families.
InterferenceModel build_model(const ModelSpec &spec, const ExperimentConfig &config, std::optional<double> x = {});

// Each command writes its outputs and a manifest.json into the output
// directory and returns the paths it wrote.
using Written = std::vector<std::filesystem::path>;

Written cmd_haar(int modes, std::uint64_t seed, const std::filesystem::path &output_dir);
Written cmd_mesh_sample(int modes, std::uint64_t seed, const std::filesystem::path &output_dir);
Written cmd_decompose(const std::filesystem::path &matrix_file, const std::filesystem::path &output_dir);
Written cmd_simulate(const ExperimentConfig &config);
Written cmd_sample(const ExperimentConfig &config);
Written cmd_compare(const ExperimentConfig &config, const std::filesystem::path &samples_file);
Written cmd_characterize(const ExperimentConfig &config, const std::filesystem::path &counts_file,
                         const std::filesystem::path &visibilities_file);

/// Entry point shared by the executable and the tests. Errors are printed
/// as one JSON object on `err`; the return value is the exit code.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace photonsim::cli
