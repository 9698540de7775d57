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

#include "photonsim/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"

namespace photonsim::io {

namespace {

using nlohmann::json;

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
}

template <class T>
T field(const json &j, const std::string &name, const std::string &path) {
    const std::string where = path.empty() ? name : path + "." + name;
    if (!j.is_object() || !j.contains(name)) {
        throw FormatError("missing field '" + where + "'", where);
    }
    try {
        return j.at(name).get<T>();
    } catch (const json::exception &) {
        throw FormatError("field '" + where + "' has the wrong type", where);
    }
}

std::string dump(const json &j) { return j.dump(2) + "\n"; }

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from(const json &j, const std::string &where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw FormatError("expected [re, im] at '" + where + "'", where);
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_json(const TransferMatrix &t) {
    json entries = json::array();
    for (Eigen::Index r = 0; r < t.entries.rows(); ++r) {
        for (Eigen::Index c = 0; c < t.entries.cols(); ++c) {
            entries.push_back(complex_json(t.entries(r, c)));
        }
    }
    return json{{"rows", t.entries.rows()}, {"cols", t.entries.cols()}, {"label", t.label}, {"entries", entries}};
}

TransferMatrix matrix_from(const json &j, const std::string &path) {
    const auto rows = field<long>(j, "rows", path);
    const auto cols = field<long>(j, "cols", path);
    const auto entries = field<json>(j, "entries", path);
    const std::string where = path.empty() ? "entries" : path + ".entries";
    if (rows < 1 || cols < 1 || !entries.is_array() || static_cast<long>(entries.size()) != rows * cols) {
        throw FormatError("matrix needs rows*cols entries", where);
    }
    TransferMatrix t;
    t.entries.resize(rows, cols);
    for (long r = 0; r < rows; ++r) {
        for (long c = 0; c < cols; ++c) {
            t.entries(r, c) = complex_from(entries[static_cast<std::size_t>(r * cols + c)], where);
        }
    }
    if (j.contains("label")) {
        t.label = field<std::string>(j, "label", path);
    }
    return t;
}

// Minimal delimited-text reader: header row, named columns, no quoting
// (no field in these formats contains the separator).
class Table {
public:
    Table(std::string_view text, char sep) {
        std::istringstream in{std::string(text)};
        std::string line;
        bool header = true;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (line.empty()) {
                continue;
            }
            std::vector<std::string> cells;
            std::size_t start = 0;
            for (;;) {
                const std::size_t end = line.find(sep, start);
                cells.push_back(line.substr(start, end == std::string::npos ? std::string::npos : end - start));
                if (end == std::string::npos) {
                    break;
                }
                start = end + 1;
            }
            if (header) {
                columns_ = std::move(cells);
                header = false;
            } else {
                if (cells.size() != columns_.size()) {
                    throw FormatError("row " + std::to_string(rows_.size() + 1) + " has " +
                                      std::to_string(cells.size()) + " cells, header has " +
                                      std::to_string(columns_.size()));
                }
                rows_.push_back(std::move(cells));
            }
        }
        if (header) {
            throw FormatError("file has no header row");
        }
    }

    std::size_t column(const std::string &name) const {
        const auto it = std::find(columns_.begin(), columns_.end(), name);
        if (it == columns_.end()) {
            throw FormatError("missing column '" + name + "'", name);
        }
        return static_cast<std::size_t>(it - columns_.begin());
    }

    const std::vector<std::vector<std::string>> &rows() const { return rows_; }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

int parse_index(std::string_view text, const std::string &name) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || v < 1) {
        throw FormatError("column '" + name + "' needs a positive integer, got '" + std::string(text) + "'", name);
    }
    return v;
}

OccupationPattern parse_pattern(const std::string &text) {
    try {
        return OccupationPattern::parse(text);
    } catch (const InvalidArgument &e) {
        throw FormatError(e.what(), "pattern");
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double parse_double(std::string_view text, const std::string &name) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw FormatError("column '" + name + "' needs a number, got '" + std::string(text) + "'", name);
    }
    return v;
}

std::string matrix_to_json(const TransferMatrix &t) { return dump(matrix_json(t)); }

TransferMatrix matrix_from_json(std::string_view text) { return matrix_from(parse_json(text), ""); }

std::string mesh_to_json(const MeshParams &mesh) {
    json couplers = json::array();
    for (const Coupler &c : mesh.couplers) {
        couplers.push_back(
            {{"layer", c.layer}, {"offset", c.offset}, {"transmissivity", c.transmissivity}, {"phase", c.phase}});
    }
    return dump({{"n_modes", mesh.n_modes}, {"couplers", couplers}, {"output_phases", mesh.output_phases}});
}

MeshParams mesh_from_json(std::string_view text) {
    const json j = parse_json(text);
    MeshParams m;
    m.n_modes = field<int>(j, "n_modes", "");
    const auto couplers = field<json>(j, "couplers", "");
    if (!couplers.is_array()) {
        throw FormatError("'couplers' must be an array", "couplers");
    }
    for (std::size_t i = 0; i < couplers.size(); ++i) {
        const std::string path = "couplers[" + std::to_string(i) + "]";
        m.couplers.push_back({field<int>(couplers[i], "layer", path), field<int>(couplers[i], "offset", path),
                              field<double>(couplers[i], "transmissivity", path),
                              field<double>(couplers[i], "phase", path)});
    }
    m.output_phases = field<std::vector<double>>(j, "output_phases", "");
    validate_mesh(m);
    return m;
}

std::string w_tensor_to_json(const WTensor &w) {
    json outputs = json::array();
    for (int l = 0; l < w.outputs(); ++l) {
        json block = json::array();
        for (int j = 0; j < w.photons(); ++j) {
            json row = json::array();
            for (int k = 0; k < w.photons(); ++k) {
                row.push_back(complex_json(w.at(j, k, l)));
            }
            block.push_back(row);
        }
        outputs.push_back(block);
    }
    return dump({{"photons", w.photons()}, {"outputs", w.outputs()}, {"entries", outputs}});
}

WTensor w_tensor_from_json(std::string_view text) {
    const json j = parse_json(text);
    const int photons = field<int>(j, "photons", "");
    const int outputs = field<int>(j, "outputs", "");
    const auto entries = field<json>(j, "entries", "");
    if (photons < 1 || outputs < 1 || !entries.is_array() || static_cast<int>(entries.size()) != outputs) {
        throw FormatError("W tensor needs one block per output", "entries");
    }
    WTensor w(photons, outputs);
    for (int l = 0; l < outputs; ++l) {
        const json &block = entries[static_cast<std::size_t>(l)];
        if (!block.is_array() || static_cast<int>(block.size()) != photons) {
            throw FormatError("W tensor block has the wrong size", "entries");
        }
        for (int a = 0; a < photons; ++a) {
            const json &row = block[static_cast<std::size_t>(a)];
            if (!row.is_array() || static_cast<int>(row.size()) != photons) {
                throw FormatError("W tensor row has the wrong size", "entries");
            }
            for (int b = 0; b < photons; ++b) {
                w.at(a, b, l) = complex_from(row[static_cast<std::size_t>(b)], "entries");
            }
        }
    }
    return w;
}

std::string spectra_to_json(const std::vector<GaussianSpectrum> &spectra) {
    json out = json::array();
    for (const GaussianSpectrum &s : spectra) {
        out.push_back({{"center", s.center}, {"width", s.width}, {"chirp", s.chirp}});
    }
    return dump(out);
}

std::vector<GaussianSpectrum> spectra_from_json(std::string_view text) {
    const json j = parse_json(text);
    if (!j.is_array()) {
        throw FormatError("spectra must be a JSON array");
    }
    std::vector<GaussianSpectrum> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string path = "[" + std::to_string(i) + "]";
        GaussianSpectrum s{field<double>(j[i], "center", path), field<double>(j[i], "width", path), 0.0};
        if (j[i].contains("chirp")) {
            s.chirp = field<double>(j[i], "chirp", path);
        }
        if (!(s.width > 0.0)) {
            throw InvalidArgument("spectral width must be positive", path + ".width");
        }
        out.push_back(s);
    }
    return out;
}

std::string dispersion_to_json(const Dispersion &d) {
    return dump({{"transmissivity_slopes", d.transmissivity_slopes},
                 {"delays", d.delays},
                 {"reference_frequency", d.reference_frequency}});
}

Dispersion dispersion_from_json(std::string_view text) {
    const json j = parse_json(text);
    Dispersion d;
    if (j.contains("transmissivity_slopes")) {
        d.transmissivity_slopes = field<std::vector<double>>(j, "transmissivity_slopes", "");
    }
    if (j.contains("delays")) {
        d.delays = field<std::vector<std::vector<double>>>(j, "delays", "");
    }
    if (j.contains("reference_frequency")) {
        d.reference_frequency = field<double>(j, "reference_frequency", "");
    }
    return d;
}

std::string distribution_to_csv(const OutcomeDistribution &dist) {
    std::string out = "pattern;probability\n";
    for (std::size_t i = 0; i < dist.patterns.size(); ++i) {
        out += dist.patterns[i].to_string() + ";" + format_double(dist.probs[i]) + "\n";
    }
    return out;
}

OutcomeDistribution distribution_from_csv(std::string_view text, int modes) {
    const Table table(text, ';');
    const std::size_t pc = table.column("pattern");
    const std::size_t qc = table.column("probability");
    OutcomeDistribution d;
    d.modes = modes;
    for (const auto &row : table.rows()) {
        OccupationPattern p = parse_pattern(row[pc]);
        if (p.max_mode() >= modes) {
            throw FormatError("pattern " + row[pc] + " exceeds " + std::to_string(modes) + " modes", "pattern");
        }
        d.patterns.push_back(std::move(p));
        d.probs.push_back(parse_double(row[qc], "probability"));
    }
    if (d.patterns.empty()) {
        throw FormatError("distribution has no rows");
    }
    d.photons = d.patterns.front().photons();
    d.normalization = std::abs(d.total() - 1.0) <= 1e-9 ? Normalization::renormalized : Normalization::physical;
    return d;
}

std::string distribution_to_json(const OutcomeDistribution &dist) {
    json outcomes = json::array();
    for (std::size_t i = 0; i < dist.patterns.size(); ++i) {
        outcomes.push_back({{"pattern", dist.patterns[i].to_string()}, {"probability", dist.probs[i]}});
    }
    return dump({{"modes", dist.modes},
                 {"photons", dist.photons},
                 {"normalization", dist.normalization == Normalization::physical ? "physical" : "renormalized"},
                 {"outcomes", outcomes}});
}

OutcomeDistribution distribution_from_json(std::string_view text) {
    const json j = parse_json(text);
    OutcomeDistribution d;
    d.modes = field<int>(j, "modes", "");
    d.photons = field<int>(j, "photons", "");
    const auto norm = field<std::string>(j, "normalization", "");
    if (norm != "physical" && norm != "renormalized") {
        throw FormatError("normalization must be 'physical' or 'renormalized'", "normalization");
    }
    d.normalization = norm == "physical" ? Normalization::physical : Normalization::renormalized;
    const auto outcomes = field<json>(j, "outcomes", "");
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const std::string path = "outcomes[" + std::to_string(i) + "]";
        d.patterns.push_back(parse_pattern(field<std::string>(outcomes[i], "pattern", path)));
        d.probs.push_back(field<double>(outcomes[i], "probability", path));
    }
    return d;
}

std::string samples_to_csv(const SampleSet &samples) {
    std::string out = "pattern\n";
    for (const OccupationPattern &s : samples.samples) {
        out += s.to_string() + "\n";
    }
    return out;
}

SampleSet samples_from_csv(std::string_view text, int modes) {
    const Table table(text, ';');
    const std::size_t pc = table.column("pattern");
    std::vector<OccupationPattern> samples;
    for (const auto &row : table.rows()) {
        samples.push_back(parse_pattern(row[pc]));
    }
    if (samples.empty()) {
        throw FormatError("sample file has no rows");
    }
    const int photons = samples.front().photons();
    return SampleSet(modes, photons, std::move(samples));
}

std::string counts_to_csv(const CountTable &table) {
    std::string out = "input,output,count\n";
    for (Eigen::Index j = 0; j < table.counts.rows(); ++j) {
        for (Eigen::Index k = 0; k < table.counts.cols(); ++k) {
            out += std::to_string(j + 1) + "," + std::to_string(k + 1) + "," + format_double(table.counts(j, k)) +
                   "\n";
        }
    }
    return out;
}

CountTable counts_from_csv(std::string_view text) {
    const Table table(text, ',');
    const std::size_t ic = table.column("input");
    const std::size_t oc = table.column("output");
    const std::size_t cc = table.column("count");
    std::map<std::pair<int, int>, double> entries;
    int inputs = 0;
    int outputs = 0;
    for (const auto &row : table.rows()) {
        const int j = parse_index(row[ic], "input");
        const int k = parse_index(row[oc], "output");
        const double c = parse_double(row[cc], "count");
        if (c < 0.0) {
            throw FormatError("counts must be non-negative", "count");
        }
        if (!entries.emplace(std::pair{j, k}, c).second) {
            throw FormatError("duplicate row for input " + row[ic] + ", output " + row[oc]);
        }
        inputs = std::max(inputs, j);
        outputs = std::max(outputs, k);
    }
    if (entries.empty()) {
        throw FormatError("count file has no rows");
    }
    CountTable t{RMatrix::Zero(inputs, outputs)};
    for (const auto &[key, c] : entries) {
        t.counts(key.first - 1, key.second - 1) = c;
    }
    return t;
}

std::string visibilities_to_csv(const std::vector<VisibilityRecord> &records) {
    std::string out = "input_a,input_b,output_a,output_b,visibility,sigma\n";
    for (const VisibilityRecord &r : records) {
        out += std::to_string(r.input_a + 1) + "," + std::to_string(r.input_b + 1) + "," +
               std::to_string(r.output_a + 1) + "," + std::to_string(r.output_b + 1) + "," +
               format_double(r.visibility) + "," + format_double(r.sigma) + "\n";
    }
    return out;
}

std::vector<VisibilityRecord> visibilities_from_csv(std::string_view text) {
    const Table table(text, ',');
    const std::size_t cols[] = {table.column("input_a"),    table.column("input_b"), table.column("output_a"),
                                table.column("output_b"),   table.column("visibility"),
                                table.column("sigma")};
    std::vector<VisibilityRecord> out;
    for (const auto &row : table.rows()) {
        VisibilityRecord r{parse_index(row[cols[0]], "input_a") - 1, parse_index(row[cols[1]], "input_b") - 1,
                           parse_index(row[cols[2]], "output_a") - 1, parse_index(row[cols[3]], "output_b") - 1,
                           parse_double(row[cols[4]], "visibility"), parse_double(row[cols[5]], "sigma")};
        if (!(r.sigma > 0.0)) {
            throw FormatError("sigma must be positive", "sigma");
        }
        out.push_back(r);
    }
    return out;
}

std::string comparison_to_csv(const std::vector<ModelComparison> &rows) {
    std::string out = "model,D,D_mean,D_std,x_fit\n";
    for (const ModelComparison &r : rows) {
        out += r.model + "," + format_double(r.distance) + "," + format_double(r.distance_mean) + "," +
               format_double(r.distance_std) + "," + (r.x_fit ? format_double(*r.x_fit) : std::string()) + "\n";
    }
    return out;
}

std::vector<ModelComparison> comparison_from_csv(std::string_view text) {
    const Table table(text, ',');
    const std::size_t mc = table.column("model");
    const std::size_t dc = table.column("D");
    const std::size_t mean_c = table.column("D_mean");
    const std::size_t std_c = table.column("D_std");
    const std::size_t xc = table.column("x_fit");
    std::vector<ModelComparison> out;
    for (const auto &row : table.rows()) {
        ModelComparison r{row[mc], parse_double(row[dc], "D"), parse_double(row[mean_c], "D_mean"),
                          parse_double(row[std_c], "D_std"), std::nullopt};
        if (!row[xc].empty()) {
            r.x_fit = parse_double(row[xc], "x_fit");
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string likelihood_to_csv(const std::vector<NamedCurve> &curves) {
    std::string out = "model,t,L\n";
    for (const NamedCurve &c : curves) {
        for (std::size_t t = 0; t < c.values.size(); ++t) {
            out += c.model + "," + std::to_string(t + 1) + "," + format_double(c.values[t]) + "\n";
        }
    }
    return out;
}

std::vector<NamedCurve> likelihood_from_csv(std::string_view text) {
    const Table table(text, ',');
    const std::size_t mc = table.column("model");
    const std::size_t tc = table.column("t");
    const std::size_t lc = table.column("L");
    std::vector<NamedCurve> out;
    for (const auto &row : table.rows()) {
        if (out.empty() || out.back().model != row[mc]) {
            out.push_back({row[mc], {}});
        }
        if (parse_index(row[tc], "t") != static_cast<int>(out.back().values.size()) + 1) {
            throw FormatError("likelihood rows must count t = 1, 2, … per model", "t");
        }
        out.back().values.push_back(parse_double(row[lc], "L"));
    }
    return out;
}

std::string characterization_to_json(const CharacterizationResult &r) {
    return dump({{"matrix", matrix_json(r.matrix)},
                 {"residual", r.residual},
                 {"n_restarts_used", r.n_restarts_used},
                 {"converged", r.converged},
                 {"gradient_norm", r.gradient_norm},
                 {"best_restart", r.best_restart}});
}

CharacterizationResult characterization_from_json(std::string_view text) {
    const json j = parse_json(text);
    CharacterizationResult r;
    r.matrix = matrix_from(field<json>(j, "matrix", ""), "matrix");
    r.residual = field<double>(j, "residual", "");
    r.n_restarts_used = field<int>(j, "n_restarts_used", "");
    r.converged = field<bool>(j, "converged", "");
    r.gradient_norm = field<double>(j, "gradient_norm", "");
    r.best_restart = field<int>(j, "best_restart", "");
    return r;
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot read " + path.string(), path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path &path, std::string_view contents) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
        throw FormatError("cannot write " + path.string(), path.string());
    }
}

}  // namespace photonsim::io
