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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "photonsim/characterization.hpp"
#include "photonsim/io.hpp"
#include "photonsim/validation.hpp"

namespace photonsim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kModelKinds = {"ideal",     "distinguishable", "overlap_uniform", "overlap",
                                           "truncated", "marked",          "circuit_w"};

std::string path_of(const std::string &parent, const std::string &name) {
    return parent.empty() ? name : parent + "." + name;
}

const json &require(const json &j, const std::string &name, const std::string &parent) {
    if (!j.is_object() || !j.contains(name)) {
        throw InvalidArgument("missing required field", path_of(parent, name));
    }
    return j.at(name);
}

template <class T>
T get(const json &j, const std::string &name, const std::string &parent) {
    try {
        return require(j, name, parent).get<T>();
    } catch (const json::exception &) {
        throw InvalidArgument("field has the wrong type", path_of(parent, name));
    }
}

template <class T>
T get_or(const json &j, const std::string &name, const std::string &parent, T fallback) {
    return j.is_object() && j.contains(name) ? get<T>(j, name, parent) : fallback;
}

fs::path resolve(const fs::path &base, const fs::path &p) { return p.is_absolute() ? p : base / p; }

OccupationPattern pattern_from_modes(const json &modes, const std::string &where) {
    if (!modes.is_array() || modes.empty()) {
        throw InvalidArgument("expected a non-empty list of 1-based modes", where);
    }
    std::vector<int> zero_based;
    for (const json &m : modes) {
        if (!m.is_number_integer() || m.get<int>() < 1) {
            throw InvalidArgument("modes are positive integers", where);
        }
        zero_based.push_back(m.get<int>() - 1);
    }
    return OccupationPattern::from_modes(std::move(zero_based));
}

InputMixture parse_input(const json &j) {
    if (j.contains("modes") == j.contains("mixture")) {
        throw InvalidArgument("input needs exactly one of 'modes' or 'mixture'", "input");
    }
    if (j.contains("modes")) {
        return InputMixture::pure(pattern_from_modes(j.at("modes"), "input.modes"));
    }
    const json &mix = j.at("mixture");
    if (!mix.is_array() || mix.empty()) {
        throw InvalidArgument("mixture must be a non-empty list", "input.mixture");
    }
    std::vector<InputMixture::Component> components;
    double total = 0.0;
    for (std::size_t i = 0; i < mix.size(); ++i) {
        const std::string where = "input.mixture[" + std::to_string(i) + "]";
        const double w = get<double>(mix[i], "weight", where);
        if (!(w >= 0.0)) {
            throw InvalidArgument("weights must be non-negative", where + ".weight");
        }
        total += w;
        components.push_back({w, pattern_from_modes(require(mix[i], "modes", where), where + ".modes")});
    }
    if (!(total > 0.0)) {
        throw InvalidArgument("mixture weights sum to zero", "input.mixture");
    }
    // Weights are relative; fractions such as 1/3 cannot be written exactly.
    for (InputMixture::Component &c : components) {
        c.weight /= total;
    }
    try {
        return InputMixture(std::move(components));
    } catch (const InvalidArgument &e) {
        throw InvalidArgument(e.what(), "input.mixture");
    }
}

CMatrix parse_overlap(const json &j, const std::string &where) {
    if (!j.is_array() || j.empty()) {
        throw InvalidArgument("overlap must be a square array of [re, im]", where);
    }
    const auto n = static_cast<Eigen::Index>(j.size());
    CMatrix x(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const json &row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw InvalidArgument("overlap must be square", where);
        }
        for (Eigen::Index c = 0; c < n; ++c) {
            const json &z = row[static_cast<std::size_t>(c)];
            if (z.is_number()) {
                x(r, c) = z.get<double>();
            } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
                x(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
            } else {
                throw InvalidArgument("overlap entries are numbers or [re, im]", where);
            }
        }
    }
    return x;
}

ModelSpec parse_model(const json &j, const std::string &where) {
    ModelSpec m;
    m.name = get<std::string>(j, "name", where);
    if (m.name.empty() || !std::all_of(m.name.begin(), m.name.end(), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
        })) {
        throw InvalidArgument("model names use letters, digits, '_', '-' and '.'", where + ".name");
    }
    m.kind = get<std::string>(j, "kind", where);
    if (!kModelKinds.contains(m.kind)) {
        throw InvalidArgument("unknown model kind '" + m.kind + "'", where + ".kind");
    }
    m.fit = get_or<bool>(j, "fit", where, false);
    if (m.fit && m.kind != "overlap_uniform" && m.kind != "truncated") {
        throw InvalidArgument("only overlap_uniform and truncated models can be fitted", where + ".fit");
    }
    if (m.kind == "overlap_uniform" || m.kind == "truncated") {
        m.x = m.fit ? get_or<double>(j, "x", where, 1.0) : get<double>(j, "x", where);
        if (!(m.x >= 0.0 && m.x <= 1.0)) {
            throw InvalidArgument("x must lie in [0, 1]", where + ".x");
        }
    }
    if (m.kind == "truncated") {
        m.k = get<int>(j, "k", where);
        if (m.k < 0) {
            throw InvalidArgument("k must be non-negative", where + ".k");
        }
    }
    if (m.kind == "marked") {
        m.label = get<int>(j, "label", where);
    }
    if (m.kind == "overlap") {
        m.overlap = parse_overlap(require(j, "matrix", where), where + ".matrix");
    }
    if (m.kind == "circuit_w") {
        m.spectra = io::spectra_from_json(require(j, "spectra", where).dump());
        if (j.contains("dispersion")) {
            m.dispersion = io::dispersion_from_json(j.at("dispersion").dump());
        }
    }
    return m;
}

json manifest(const std::string &command, const ExperimentConfig *config, const json &arguments,
              const Written &outputs, const fs::path &dir) {
    json seeds = json::object();
    json files = json::array();
    if (config != nullptr) {
        for (const auto &[k, v] : config->seeds) {
            seeds[k] = v;
        }
        if (config->haar) {
            seeds["circuit"] = config->haar->second;
        }
    }
    for (const fs::path &p : outputs) {
        files.push_back(p.lexically_relative(dir).generic_string());
    }
    return {{"command", command},
            {"version", kVersion},
            {"config_hash", config != nullptr ? config->hash : std::string()},
            {"seeds", seeds},
            {"arguments", arguments},
            {"outputs", files}};
}

Written finish(const std::string &command, const ExperimentConfig *config, const json &arguments, Written written,
               const fs::path &dir) {
    const fs::path path = dir / "manifest.json";
    io::write_file(path, manifest(command, config, arguments, written, dir).dump(2) + "\n");
    written.push_back(path);
    return written;
}

std::uint64_t seed_of(const ExperimentConfig &config, const std::string &name) {
    const auto it = config.seeds.find(name);
    return it == config.seeds.end() ? 0 : it->second;
}

const InputMixture &input_of(const ExperimentConfig &config) {
    if (!config.input) {
        throw InvalidArgument("missing required field", "input");
    }
    return *config.input;
}

const ModelSpec &model_named(const ExperimentConfig &config, const std::string &name, const std::string &field) {
    for (const ModelSpec &m : config.models) {
        if (m.name == name) {
            return m;
        }
    }
    throw InvalidArgument("no model named '" + name + "'", field);
}

int series_order(const ModelSpec &spec, int photons) { return spec.kind == "truncated" ? spec.k : photons; }

}  // namespace

std::string fnv1a_hex(const std::string &bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentConfig parse_config(const std::string &text, const fs::path &base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw FormatError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw InvalidArgument("config must be a JSON object");
    }
    ExperimentConfig c;
    c.hash = fnv1a_hex(text);
    if (j.contains("circuit")) {
        const json &circ = j.at("circuit");
        const int sources = static_cast<int>(circ.contains("haar")) + static_cast<int>(circ.contains("mesh_file")) +
                            static_cast<int>(circ.contains("matrix_file"));
        if (!circ.is_object() || sources != 1) {
            throw InvalidArgument("circuit needs exactly one of 'haar', 'mesh_file', 'matrix_file'", "circuit");
        }
        if (circ.contains("haar")) {
            const int modes = get<int>(circ.at("haar"), "modes", "circuit.haar");
            if (modes < 1) {
                throw InvalidArgument("modes must be positive", "circuit.haar.modes");
            }
            c.haar = {{modes, get<std::uint64_t>(circ.at("haar"), "seed", "circuit.haar")}};
        } else if (circ.contains("mesh_file")) {
            c.mesh_file = resolve(base_dir, get<std::string>(circ, "mesh_file", "circuit"));
        } else {
            c.matrix_file = resolve(base_dir, get<std::string>(circ, "matrix_file", "circuit"));
        }
    }
    if (j.contains("input")) {
        c.input = parse_input(j.at("input"));
    }
    if (j.contains("models")) {
        const json &models = j.at("models");
        if (!models.is_array()) {
            throw InvalidArgument("models must be a list", "models");
        }
        std::set<std::string> names;
        for (std::size_t i = 0; i < models.size(); ++i) {
            const std::string where = "models[" + std::to_string(i) + "]";
            c.models.push_back(parse_model(models[i], where));
            if (!names.insert(c.models.back().name).second) {
                throw InvalidArgument("duplicate model name '" + c.models.back().name + "'", where + ".name");
            }
        }
    }
    const std::string norm = get_or<std::string>(j, "normalization", "", "renormalized");
    if (norm != "physical" && norm != "renormalized") {
        throw InvalidArgument("normalization is 'physical' or 'renormalized'", "normalization");
    }
    c.normalization = norm == "physical" ? Normalization::physical : Normalization::renormalized;
    c.samples = get_or<std::size_t>(j, "samples", "", 0);
    c.sample_model = get_or<std::string>(j, "sample_model", "", c.models.empty() ? "" : c.models.front().name);
    c.reference_model =
        get_or<std::string>(j, "reference_model", "", c.models.empty() ? "" : c.models.front().name);
    if (!c.models.empty()) {
        model_named(c, c.sample_model, "sample_model");
        model_named(c, c.reference_model, "reference_model");
    }
    c.bootstrap_trials = get_or<int>(j, "bootstrap_trials", "", 100);
    if (c.bootstrap_trials < 2) {
        throw InvalidArgument("bootstrap needs at least two trials", "bootstrap_trials");
    }
    if (j.contains("seeds")) {
        const json &seeds = j.at("seeds");
        if (!seeds.is_object()) {
            throw InvalidArgument("seeds must be an object", "seeds");
        }
        for (const auto &[k, v] : seeds.items()) {
            if (!v.is_number_unsigned()) {
                throw InvalidArgument("seeds are non-negative integers", "seeds." + k);
            }
            c.seeds[k] = v.get<std::uint64_t>();
        }
    }
    c.restarts = get_or<int>(j, "restarts", "", 20);
    c.x_assumed = get_or<double>(j, "x_assumed", "", 1.0);
    c.output_dir = resolve(base_dir, get_or<std::string>(j, "output_dir", "", "out"));
    return c;
}

TransferMatrix load_circuit(const ExperimentConfig &config) {
    if (config.haar) {
        return haar_random(config.haar->first, config.haar->second);
    }
    if (config.mesh_file) {
        return mesh_to_matrix(io::mesh_from_json(io::read_file(*config.mesh_file)));
    }
    if (config.matrix_file) {
        return io::matrix_from_json(io::read_file(*config.matrix_file));
    }
    throw InvalidArgument("missing required field", "circuit");
}

InterferenceModel build_model(const ModelSpec &spec, const ExperimentConfig &config, std::optional<double> x) {
    const int n = input_of(config).photons();
    const double overlap = x.value_or(spec.x);
    if (spec.kind == "ideal") {
        return Ideal{};
    }
    if (spec.kind == "distinguishable") {
        return Overlap{uniform_overlap(n, 0.0)};
    }
    if (spec.kind == "overlap_uniform") {
        return Overlap{uniform_overlap(n, overlap)};
    }
    if (spec.kind == "truncated") {
        return TruncatedUniform{overlap, spec.k};
    }
    if (spec.kind == "marked") {
        return Overlap{marked_photon_overlap(n, spec.label)};
    }
    if (spec.kind == "overlap") {
        return Overlap{OverlapMatrix::from_matrix(*spec.overlap)};
    }
    // circuit_w
    const InputMixture &input = input_of(config);
    if (input.components().size() != 1) {
        throw InvalidArgument("circuit_w models need a pure input", "input");
    }
    if (static_cast<int>(spec.spectra.size()) != n) {
        throw InvalidArgument("circuit_w needs one spectrum per photon", "models." + spec.name + ".spectra");
    }
    const FrequencyGrid grid = FrequencyGrid::covering(spec.spectra);
    const std::vector<int> inputs = input.components().front().pattern.expanded_modes();
    if (spec.dispersion) {
        if (!config.mesh_file) {
            throw InvalidArgument("dispersion needs a mesh_file circuit", "models." + spec.name + ".dispersion");
        }
        const MeshParams mesh = io::mesh_from_json(io::read_file(*config.mesh_file));
        return CircuitW{build_w_tensor(frequency_dependent_mesh(mesh, *spec.dispersion, grid).transfer,
                                       spec.spectra, inputs)};
    }
    return CircuitW{
        build_w_tensor(FrequencyResolvedTransfer::flat(grid, load_circuit(config).entries), spec.spectra, inputs)};
}

Written cmd_haar(int modes, std::uint64_t seed, const fs::path &output_dir) {
    TransferMatrix u = haar_random(modes, seed);
    u.label = "haar n=" + std::to_string(modes) + " seed=" + std::to_string(seed);
    const fs::path path = output_dir / "matrix.json";
    io::write_file(path, io::matrix_to_json(u));
    return finish("haar", nullptr, {{"modes", modes}, {"seed", seed}}, {path}, output_dir);
}

Written cmd_mesh_sample(int modes, std::uint64_t seed, const fs::path &output_dir) {
    const MeshParams mesh = sample_haar_mesh(modes, seed);
    TransferMatrix u = mesh_to_matrix(mesh);
    u.label = "haar mesh n=" + std::to_string(modes) + " seed=" + std::to_string(seed);
    const fs::path mesh_path = output_dir / "mesh.json";
    const fs::path matrix_path = output_dir / "matrix.json";
    io::write_file(mesh_path, io::mesh_to_json(mesh));
    io::write_file(matrix_path, io::matrix_to_json(u));
    return finish("mesh-sample", nullptr, {{"modes", modes}, {"seed", seed}}, {mesh_path, matrix_path},
                  output_dir);
}

Written cmd_decompose(const fs::path &matrix_file, const fs::path &output_dir) {
    const std::string text = io::read_file(matrix_file);
    const MeshParams mesh = clements_decompose(io::matrix_from_json(text));
    const fs::path path = output_dir / "mesh.json";
    io::write_file(path, io::mesh_to_json(mesh));
    return finish("decompose", nullptr, {{"matrix_file", matrix_file.generic_string()}, {"matrix_hash", fnv1a_hex(text)}},
                  {path}, output_dir);
}

Written cmd_simulate(const ExperimentConfig &config) {
    const TransferMatrix t = load_circuit(config);
    const InputMixture &input = input_of(config);
    if (config.models.empty()) {
        throw InvalidArgument("simulate needs at least one model", "models");
    }
    Written written;
    const fs::path circuit = config.output_dir / "circuit.json";
    io::write_file(circuit, io::matrix_to_json(t));
    written.push_back(circuit);
    for (const ModelSpec &spec : config.models) {
        const OutcomeDistribution d =
            output_distribution(t, input, build_model(spec, config), {config.normalization, 0});
        const fs::path path = config.output_dir / (spec.name + ".csv");
        io::write_file(path, io::distribution_to_csv(d));
        written.push_back(path);
    }
    return finish("simulate", &config, json::object(), std::move(written), config.output_dir);
}

Written cmd_sample(const ExperimentConfig &config) {
    const TransferMatrix t = load_circuit(config);
    if (config.samples == 0) {
        throw InvalidArgument("sample count must be positive", "samples");
    }
    const ModelSpec &spec = model_named(config, config.sample_model, "sample_model");
    const OutcomeDistribution d =
        output_distribution(t, input_of(config), build_model(spec, config), {Normalization::renormalized, 0});
    const SampleSet s = draw_samples(d, config.samples, seed_of(config, "sample"));
    const fs::path path = config.output_dir / "samples.csv";
    io::write_file(path, io::samples_to_csv(s));
    return finish("sample", &config, {{"model", spec.name}}, {path}, config.output_dir);
}

Written cmd_compare(const ExperimentConfig &config, const fs::path &samples_file) {
    const TransferMatrix t = load_circuit(config);
    const InputMixture &input = input_of(config);
    if (config.models.empty()) {
        throw InvalidArgument("compare needs at least one model", "models");
    }
    const SampleSet samples = io::samples_from_csv(io::read_file(samples_file), static_cast<int>(t.out_modes()));
    if (samples.photons != input.photons()) {
        throw InvalidArgument("samples have " + std::to_string(samples.photons) + " photons but the input has " +
                                  std::to_string(input.photons()),
                              "input");
    }
    const std::vector<double> counts = samples.counts();
    const std::vector<double> data = normalized(counts);
    const DistributionOptions options{Normalization::renormalized, 0};

    std::optional<SeriesTable> series;
    std::map<std::string, std::vector<double>> probs;
    std::vector<ModelComparison> rows;
    for (const ModelSpec &spec : config.models) {
        ModelComparison row{spec.name, 0.0, 0.0, 0.0, std::nullopt};
        if (spec.fit) {
            if (!series) {
                series.emplace(t, input, options);
            }
            const int order = series_order(spec, input.photons());
            const OverlapFit fit = fit_overlap(counts, *series, order);
            row.x_fit = fit.x;
            probs[spec.name] = series->evaluate(fit.x, order, Normalization::renormalized).probs;
        } else {
            probs[spec.name] = output_distribution(t, input, build_model(spec, config), options).probs;
        }
        const std::vector<double> &p = probs[spec.name];
        row.distance = tvd(data, p);
        const BootstrapDistance boot =
            poisson_bootstrap_distance(counts, p, config.bootstrap_trials, seed_of(config, "bootstrap"));
        row.distance_mean = boot.mean;
        row.distance_std = boot.std;
        rows.push_back(std::move(row));
    }
    std::vector<io::NamedCurve> curves;
    const std::vector<double> &reference = probs.at(config.reference_model);
    for (const ModelSpec &spec : config.models) {
        curves.push_back({spec.name, likelihood_ratio_curve(samples, probs.at(spec.name), reference).values});
    }
    const fs::path comparison = config.output_dir / "comparison.csv";
    const fs::path likelihood = config.output_dir / "likelihood.csv";
    io::write_file(comparison, io::comparison_to_csv(rows));
    io::write_file(likelihood, io::likelihood_to_csv(curves));
    return finish("compare", &config,
                  {{"samples_file", samples_file.generic_string()},
                   {"samples_hash", fnv1a_hex(io::read_file(samples_file))},
                   {"reference_model", config.reference_model}},
                  {comparison, likelihood}, config.output_dir);
}

Written cmd_characterize(const ExperimentConfig &config, const fs::path &counts_file,
                         const fs::path &visibilities_file) {
    const std::string counts_text = io::read_file(counts_file);
    const std::string vis_text = io::read_file(visibilities_file);
    const CountTable counts = io::counts_from_csv(counts_text);
    const std::vector<VisibilityRecord> records = io::visibilities_from_csv(vis_text);
    const RMatrix magnitudes = magnitudes_from_counts(counts);
    const auto inputs = static_cast<int>(magnitudes.cols());
    const auto outputs = static_cast<int>(magnitudes.rows());
    const auto expected = static_cast<long>(binomial(inputs, 2) * binomial(outputs, 2));
    const long shortfall = std::max(0L, expected - static_cast<long>(records.size()));

    RetrievalOptions options;
    options.x_assumed = config.x_assumed;
    options.restarts = config.restarts;
    options.seed = seed_of(config, "characterize");
    CharacterizationResult result = retrieve_phases(magnitudes, records, options);
    result.matrix.label = "characterized";

    const int free_phases = (outputs - 1) * (inputs - 1);
    const json report = {{"inputs", inputs},
                         {"outputs", outputs},
                         {"records", records.size()},
                         {"expected_records", expected},
                         {"shortfall", shortfall},
                         {"free_phases", free_phases},
                         {"degrees_of_freedom", static_cast<long>(records.size()) - free_phases},
                         {"residual", result.residual},
                         {"converged", result.converged},
                         {"gradient_norm", result.gradient_norm}};
    const fs::path matrix_path = config.output_dir / "characterization.json";
    const fs::path report_path = config.output_dir / "report.json";
    io::write_file(matrix_path, io::characterization_to_json(result));
    io::write_file(report_path, report.dump(2) + "\n");
    return finish("characterize", &config,
                  {{"counts_hash", fnv1a_hex(counts_text)}, {"visibilities_hash", fnv1a_hex(vis_text)}},
                  {matrix_path, report_path}, config.output_dir);
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Multi-photon interference simulation and validation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    int modes = 0;
    std::uint64_t seed = 0;
    std::string output_dir = ".";
    std::string matrix_file;
    std::string config_file;
    std::string samples_file;
    std::string counts_file;
    std::string vis_file;
    std::vector<std::string> seed_overrides;  // name=value
    std::optional<std::string> output_override;

    auto *haar = app.add_subcommand("haar", "Haar-random unitary by QR of a Ginibre matrix");
    auto *mesh = app.add_subcommand("mesh-sample", "Haar-random unitary dialled into a square coupler mesh");
    for (auto *sub : {haar, mesh}) {
        sub->add_option("--modes", modes, "Number of modes")->required()->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "Random seed")->required();
        sub->add_option("--output-dir", output_dir, "Directory for matrix/mesh JSON");
    }
    auto *decompose = app.add_subcommand("decompose", "Square-mesh decomposition of a unitary");
    decompose->add_option("--matrix", matrix_file, "Matrix JSON")->required();
    decompose->add_option("--output-dir", output_dir, "Directory for mesh JSON");

    auto *simulate = app.add_subcommand("simulate", "Outcome distributions for every configured model");
    auto *sample = app.add_subcommand("sample", "Draw samples from the configured sample model");
    auto *compare = app.add_subcommand("compare", "Distances and likelihood curves against samples");
    auto *characterize = app.add_subcommand("characterize", "Transfer matrix from counts and visibilities");
    for (auto *sub : {simulate, sample, compare, characterize}) {
        auto *opt = sub->add_option("--config", config_file, "Experiment config JSON");
        if (sub != characterize) {
            opt->required();
        }
        sub->add_option("--seed", seed_overrides, "Override a seed, e.g. --seed sample=7");
        sub->add_option("--output-dir", output_override, "Override the output directory");
    }
    compare->add_option("--samples", samples_file, "Samples CSV")->required();
    characterize->add_option("--counts", counts_file, "Single-photon counts CSV")->required();
    characterize->add_option("--visibilities", vis_file, "Visibility CSV")->required();

    const auto report = [&](const std::string &kind, const std::string &message, const std::string &field) {
        err << json{{"error", kind}, {"message", message}, {"field", field}}.dump() << "\n";
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion &) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError &e) {
        report("usage", e.what(), "");
        return 2;
    }

    try {
        const auto load_config = [&]() {
            ExperimentConfig c;
            if (!config_file.empty()) {
                const fs::path path(config_file);
                c = parse_config(io::read_file(path), path.parent_path());
            } else {
                c.output_dir = "out";
            }
            for (const std::string &entry : seed_overrides) {
                const std::size_t eq = entry.find('=');
                std::uint64_t v = 0;
                const char *end = entry.data() + entry.size();
                if (eq == std::string::npos || eq == 0 ||
                    std::from_chars(entry.data() + eq + 1, end, v).ptr != end || eq + 1 == entry.size()) {
                    throw InvalidArgument("seed override must be name=value", "--seed");
                }
                c.seeds[entry.substr(0, eq)] = v;
            }
            if (output_override) {
                c.output_dir = *output_override;
            }
            return c;
        };
        Written written;
        if (*haar) {
            written = cmd_haar(modes, seed, output_dir);
        } else if (*mesh) {
            written = cmd_mesh_sample(modes, seed, output_dir);
        } else if (*decompose) {
            written = cmd_decompose(matrix_file, output_dir);
        } else if (*simulate) {
            written = cmd_simulate(load_config());
        } else if (*sample) {
            written = cmd_sample(load_config());
        } else if (*compare) {
            written = cmd_compare(load_config(), samples_file);
        } else {
            written = cmd_characterize(load_config(), counts_file, vis_file);
        }
        for (const fs::path &p : written) {
            out << p.generic_string() << "\n";
        }
        return 0;
    } catch (const Error &e) {
        report(e.kind(), e.what(), e.field());
    } catch (const std::exception &e) {
        report("internal", e.what(), "");
    }
    return 1;
}

}  // namespace photonsim::cli
