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

// Text formats. Every writer is canonical: reading its output and writing
// it again reproduces the same bytes. Doubles use the shortest decimal
// form that parses back to the same value. Mode and photon indices are
// 1-based in every file.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "photonsim/characterization.hpp"
#include "photonsim/interference.hpp"
#include "photonsim/photon_models.hpp"
#include "photonsim/unitary_mesh.hpp"
#include "photonsim/validation.hpp"

namespace photonsim::io {

std::string format_double(double v);
/// Throws FormatError naming `field` when `text` is not a number.
double parse_double(std::string_view text, const std::string &field);

// {"rows", "cols", "label", "entries": [[re, im], …] row-major}
std::string matrix_to_json(const TransferMatrix &t);
TransferMatrix matrix_from_json(std::string_view text);

// {"n_modes", "couplers": [{"layer", "offset", "transmissivity", "phase"}], "output_phases"}
std::string mesh_to_json(const MeshParams &mesh);
MeshParams mesh_from_json(std::string_view text);

// {"photons", "outputs", "entries": [output][photon j][photon k] = [re, im]}
std::string w_tensor_to_json(const WTensor &w);
WTensor w_tensor_from_json(std::string_view text);

// [{"center", "width", "chirp"}, …]
std::string spectra_to_json(const std::vector<GaussianSpectrum> &spectra);
std::vector<GaussianSpectrum> spectra_from_json(std::string_view text);

// {"transmissivity_slopes", "delays", "reference_frequency"}
std::string dispersion_to_json(const Dispersion &d);
Dispersion dispersion_from_json(std::string_view text);

// Header "pattern;probability"; one row per collision-free pattern.
std::string distribution_to_csv(const OutcomeDistribution &dist);
OutcomeDistribution distribution_from_csv(std::string_view text, int modes);

// {"modes", "photons", "normalization", "outcomes": [{"pattern", "probability"}]}
std::string distribution_to_json(const OutcomeDistribution &dist);
OutcomeDistribution distribution_from_json(std::string_view text);

// Header "pattern"; one detected event per row in acquisition order.
std::string samples_to_csv(const SampleSet &samples);
SampleSet samples_from_csv(std::string_view text, int modes);

// Header "input,output,count"; absent pairs read as zero.
std::string counts_to_csv(const CountTable &table);
CountTable counts_from_csv(std::string_view text);

// Header "input_a,input_b,output_a,output_b,visibility,sigma".
std::string visibilities_to_csv(const std::vector<VisibilityRecord> &records);
std::vector<VisibilityRecord> visibilities_from_csv(std::string_view text);

// Header "model,D,D_mean,D_std,x_fit"; x_fit is empty when not fitted.
std::string comparison_to_csv(const std::vector<ModelComparison> &rows);
std::vector<ModelComparison> comparison_from_csv(std::string_view text);

struct NamedCurve {
    std::string model;
    std::vector<double> values;
};

// Header "model,t,L" with t counting samples from 1.
std::string likelihood_to_csv(const std::vector<NamedCurve> &curves);
std::vector<NamedCurve> likelihood_from_csv(std::string_view text);

// {"matrix": {…}, "residual", "n_restarts_used", "converged", "gradient_norm", "best_restart"}
std::string characterization_to_json(const CharacterizationResult &r);
CharacterizationResult characterization_from_json(std::string_view text);

std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view contents);

}  // namespace photonsim::io
