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

#include "photonsim/interference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "photonsim/parallel.hpp"
#include "photonsim/permanent.hpp"

namespace photonsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kImagResidueTol = 1e-10;
constexpr double kNegativeTol = 1e-10;

std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

void check_event(const TransferMatrix &t, const OccupationPattern &input, const OccupationPattern &output) {
    if (!output.collision_free()) {
        throw UnsupportedOutcome("output pattern " + output.to_string() +
                                 " has a multiply occupied mode; threshold detectors cannot resolve it");
    }
    if (input.photons() != output.photons()) {
        throw InvalidArgument("input has " + std::to_string(input.photons()) + " photons but output has " +
                              std::to_string(output.photons()));
    }
    if (input.photons() == 0) {
        throw InvalidArgument("pattern has no photons");
    }
    if (input.max_mode() >= t.in_modes() || output.max_mode() >= t.out_modes()) {
        throw InvalidArgument("pattern addresses a mode outside the transfer matrix");
    }
}

// Real part of a tensor-permanent sum after checking that the imaginary
// part is only rounding.
double checked_real(Complex z, const char *what) {
    if (std::abs(z.imag()) > kImagResidueTol * std::max(1.0, std::abs(z.real()))) {
        throw PrecisionError(std::string(what) + " probability has imaginary residue " + std::to_string(z.imag()));
    }
    if (z.real() < -kNegativeTol * std::max(1.0, std::abs(z.real()))) {
        throw PrecisionError(std::string(what) + " probability is negative: " + std::to_string(z.real()));
    }
    return std::max(0.0, z.real());
}

double overlap_prob(const CMatrix &a, const OverlapMatrix &x) {
    const Eigen::Index n = a.rows();
    std::vector<CMatrix> kernels(static_cast<std::size_t>(n), CMatrix(n, n));
    for (Eigen::Index k = 0; k < n; ++k) {
        CMatrix &g = kernels[static_cast<std::size_t>(k)];
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                g(i, j) = a(k, i) * std::conj(a(k, j)) * x(static_cast<int>(i), static_cast<int>(j));
            }
        }
    }
    return checked_real(tensor_permanent(kernels), "overlap-model");
}

double w_prob(const WTensor &w, const OccupationPattern &output) {
    const std::vector<int> outs = output.expanded_modes();
    const Eigen::Index n = static_cast<Eigen::Index>(outs.size());
    std::vector<CMatrix> kernels(outs.size(), CMatrix(n, n));
    for (std::size_t k = 0; k < outs.size(); ++k) {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                kernels[k](i, j) = w.at(static_cast<int>(i), static_cast<int>(j), outs[k]);
            }
        }
    }
    return checked_real(tensor_permanent(kernels), "W-tensor");
}

// Σ_{σ,ρ} a_σ a*_ρ grouped by the number of positions where σ and ρ differ.
std::vector<double> raw_series(const CMatrix &a) {
    const int n = static_cast<int>(a.rows());
    if (n > kMaxSeriesPhotons) {
        throw InvalidArgument("series expansion supports at most " + std::to_string(kMaxSeriesPhotons) + " photons");
    }
    const auto perms = all_permutations(n);
    std::vector<Complex> amp(perms.size());
    for (std::size_t s = 0; s < perms.size(); ++s) {
        Complex p = 1;
        for (int k = 0; k < n; ++k) {
            p *= a(k, perms[s][static_cast<std::size_t>(k)]);
        }
        amp[s] = p;
    }
    std::vector<double> coeff(static_cast<std::size_t>(n + 1), 0.0);
    for (std::size_t s = 0; s < perms.size(); ++s) {
        coeff[0] += std::norm(amp[s]);
        for (std::size_t r = s + 1; r < perms.size(); ++r) {
            int d = 0;
            for (int k = 0; k < n; ++k) {
                d += perms[s][static_cast<std::size_t>(k)] != perms[r][static_cast<std::size_t>(k)] ? 1 : 0;
            }
            coeff[static_cast<std::size_t>(d)] += 2.0 * (amp[s] * std::conj(amp[r])).real();
        }
    }
    return coeff;
}

double truncated_sum(const std::vector<double> &coeff, double x, int k_max) {
    double total = 0.0;
    double xk = 1.0;
    for (int k = 0; k < static_cast<int>(coeff.size()); ++k) {
        if (k > k_max) {
            break;
        }
        total += xk * coeff[static_cast<std::size_t>(k)];
        xk *= x;
    }
    return total;
}

unsigned resolve_workers(unsigned workers) {
    if (workers == 0) {
        workers = std::max(1U, std::thread::hardware_concurrency());
    }
    return workers;
}

}  // namespace

std::string model_kind(const InterferenceModel &model) {
    return std::visit(overloaded{[](const Ideal &) { return std::string("ideal"); },
                                 [](const Overlap &) { return std::string("overlap"); },
                                 [](const TruncatedUniform &) { return std::string("truncated"); },
                                 [](const CircuitW &) { return std::string("circuit_w"); }},
                      model);
}

InputMixture::InputMixture(std::vector<Component> components) : components_(std::move(components)) {
    if (components_.empty()) {
        throw InvalidArgument("input mixture is empty");
    }
    double total = 0.0;
    const int n = components_.front().pattern.photons();
    for (const Component &c : components_) {
        if (!(c.weight >= 0.0)) {
            throw InvalidArgument("mixture weights must be non-negative");
        }
        if (c.pattern.photons() != n) {
            throw InvalidArgument("mixture components must have equal photon numbers");
        }
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw InvalidArgument("mixture weights sum to " + std::to_string(total) + ", not 1");
    }
}

InputMixture InputMixture::pure(OccupationPattern pattern) { return InputMixture({{1.0, std::move(pattern)}}); }

double OutcomeDistribution::total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

OutcomeDistribution OutcomeDistribution::renormalized() const {
    const double sum = total();
    if (!(sum > 0.0)) {
        throw InvalidArgument("cannot renormalize a distribution with zero total probability");
    }
    OutcomeDistribution out = *this;
    for (double &p : out.probs) {
        p /= sum;
    }
    out.normalization = Normalization::renormalized;
    return out;
}

double OutcomeDistribution::prob(const OccupationPattern &pattern) const {
    const std::int64_t r = collision_free_rank(pattern, modes);
    if (r < 0 || pattern.photons() != photons || pattern.max_mode() >= modes) {
        return 0.0;
    }
    return probs[static_cast<std::size_t>(r)];
}

CMatrix build_submatrix(const TransferMatrix &t, const OccupationPattern &input, const OccupationPattern &output) {
    if (input.photons() != output.photons()) {
        throw InvalidArgument("input and output photon numbers differ");
    }
    if (input.max_mode() >= t.in_modes() || output.max_mode() >= t.out_modes()) {
        throw InvalidArgument("pattern mode index outside the " + std::to_string(t.out_modes()) + "x" +
                              std::to_string(t.in_modes()) + " transfer matrix");
    }
    const std::vector<int> cols = input.expanded_modes();
    const std::vector<int> rows = output.expanded_modes();
    const auto n = static_cast<Eigen::Index>(cols.size());
    CMatrix a(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            a(r, c) = t.entries(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
        }
    }
    return a;
}

Complex tensor_permanent(std::span<const CMatrix> kernels) {
    const auto n = static_cast<Eigen::Index>(kernels.size());
    for (const CMatrix &g : kernels) {
        if (g.rows() != n || g.cols() != n) {
            throw InvalidArgument("tensor permanent needs N kernels of size NxN");
        }
    }
    if (n == 0) {
        return {1.0, 0.0};
    }
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 0);
    CMatrix b(n, n);
    Complex total = 0;
    do {
        for (Eigen::Index k = 0; k < n; ++k) {
            b.row(k) = kernels[static_cast<std::size_t>(k)].row(sigma[static_cast<std::size_t>(k)]);
        }
        total += permanent(b);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return total;
}

double event_prob(const TransferMatrix &t, const OccupationPattern &input, const OccupationPattern &output,
                  const InterferenceModel &model) {
    check_event(t, input, output);
    const int n = input.photons();
    const double norm = input.multiplicity_factorial();
    return std::visit(
        overloaded{
            [&](const Ideal &) { return std::norm(permanent(build_submatrix(t, input, output))) / norm; },
            [&](const Overlap &m) {
                if (m.x.photons() != n) {
                    throw InvalidArgument("overlap matrix is " + std::to_string(m.x.photons()) + "x" +
                                          std::to_string(m.x.photons()) + " but the event has " +
                                          std::to_string(n) + " photons");
                }
                return overlap_prob(build_submatrix(t, input, output), m.x) / norm;
            },
            [&](const TruncatedUniform &m) {
                if (m.k_max < 0 || m.k_max > n) {
                    throw InvalidArgument("truncation order must lie in [0, N]");
                }
                return truncated_sum(series_coefficients(t, input, output), m.x, m.k_max);
            },
            [&](const CircuitW &m) {
                if (m.w.photons() != n) {
                    throw InvalidArgument("W tensor photon count does not match the event");
                }
                if (output.max_mode() >= m.w.outputs()) {
                    throw InvalidArgument("output mode outside the W tensor");
                }
                return w_prob(m.w, output) / norm;
            }},
        model);
}

std::vector<double> series_coefficients(const TransferMatrix &t, const OccupationPattern &input,
                                        const OccupationPattern &output) {
    check_event(t, input, output);
    std::vector<double> coeff = raw_series(build_submatrix(t, input, output));
    const double norm = input.multiplicity_factorial();
    for (double &c : coeff) {
        c /= norm;
    }
    coeff[1] = 0.0;
    return coeff;
}

OutcomeDistribution output_distribution(const TransferMatrix &t, const InputMixture &input,
                                        const InterferenceModel &model, const DistributionOptions &options) {
    const int n = input.photons();
    if (n > kMaxDistributionPhotons) {
        throw InvalidArgument("output_distribution supports at most " + std::to_string(kMaxDistributionPhotons) +
                              " photons");
    }
    if (std::holds_alternative<CircuitW>(model) && input.components().size() > 1) {
        throw InvalidArgument("a W tensor describes one input configuration; mixtures are not supported");
    }
    OutcomeDistribution dist;
    dist.modes = static_cast<int>(t.out_modes());
    dist.photons = n;
    dist.patterns = collision_free_patterns(dist.modes, n);
    dist.probs.assign(dist.patterns.size(), 0.0);
    const bool truncated = std::holds_alternative<TruncatedUniform>(model);
    parallel_for(dist.patterns.size(), resolve_workers(options.workers), [&](std::size_t k) {
        double p = 0.0;
        for (const auto &c : input.components()) {
            if (c.weight > 0.0) {
                p += c.weight * event_prob(t, c.pattern, dist.patterns[k], model);
            }
        }
        if (truncated) {
            p = std::max(0.0, p);
        }
        dist.probs[k] = p;
    });
    if (options.normalization == Normalization::renormalized) {
        return dist.renormalized();
    }
    return dist;
}

OutcomeDistribution output_distribution(const TransferMatrix &t, const OccupationPattern &input,
                                        const InterferenceModel &model, const DistributionOptions &options) {
    return output_distribution(t, InputMixture::pure(input), model, options);
}

double collision_free_fraction(const TransferMatrix &t, const InputMixture &input, const InterferenceModel &model) {
    return output_distribution(t, input, model, {Normalization::physical, 0}).total();
}

SeriesTable::SeriesTable(const TransferMatrix &t, const InputMixture &input, const DistributionOptions &options)
    : modes_(static_cast<int>(t.out_modes())), photons_(input.photons()) {
    patterns_ = collision_free_patterns(modes_, photons_);
    coeffs_.assign(patterns_.size(), std::vector<double>(static_cast<std::size_t>(photons_ + 1), 0.0));
    parallel_for(patterns_.size(), resolve_workers(options.workers), [&](std::size_t k) {
        for (const auto &c : input.components()) {
            if (c.weight <= 0.0) {
                continue;
            }
            const std::vector<double> s = series_coefficients(t, c.pattern, patterns_[k]);
            for (std::size_t d = 0; d < s.size(); ++d) {
                coeffs_[k][d] += c.weight * s[d];
            }
        }
    });
}

OutcomeDistribution SeriesTable::evaluate(double x, int k_max, Normalization normalization) const {
    OutcomeDistribution dist;
    dist.modes = modes_;
    dist.photons = photons_;
    dist.patterns = patterns_;
    dist.probs.resize(patterns_.size());
    for (std::size_t k = 0; k < patterns_.size(); ++k) {
        dist.probs[k] = std::max(0.0, truncated_sum(coeffs_[k], x, k_max));
    }
    if (normalization == Normalization::renormalized) {
        return dist.renormalized();
    }
    return dist;
}

}  // namespace photonsim
