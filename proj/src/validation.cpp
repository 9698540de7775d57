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

#include "photonsim/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "photonsim/parallel.hpp"

namespace photonsim {

namespace {

void check_lengths(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw InvalidArgument("distributions have " + std::to_string(p.size()) + " and " + std::to_string(q.size()) +
                              " entries");
    }
}

std::size_t support_size(int modes, int photons) {
    return static_cast<std::size_t>(binomial(modes, photons));
}

}  // namespace

double fidelity(std::span<const double> p, std::span<const double> q) {
    check_lengths(p, q);
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        s += std::sqrt(std::max(0.0, p[j]) * std::max(0.0, q[j]));
    }
    return std::min(1.0, s * s);
}

double tvd(std::span<const double> p, std::span<const double> q) {
    check_lengths(p, q);
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        s += std::abs(p[j] - q[j]);
    }
    return 0.5 * s;
}

std::vector<double> normalized(std::span<const double> counts) {
    double total = 0.0;
    for (double c : counts) {
        if (c < 0.0 || !std::isfinite(c)) {
            throw InvalidArgument("counts must be finite and non-negative");
        }
        total += c;
    }
    if (total <= 0.0) {
        throw InvalidArgument("all counts are zero");
    }
    std::vector<double> out(counts.begin(), counts.end());
    for (double &c : out) {
        c /= total;
    }
    return out;
}

SampleSet::SampleSet(int modes_, int photons_, std::vector<OccupationPattern> samples_)
    : modes(modes_), photons(photons_), samples(std::move(samples_)) {
    if (photons < 1 || modes < photons) {
        throw InvalidArgument("sample set needs 1 ≤ photons ≤ modes");
    }
    for (const OccupationPattern &s : samples) {
        if (!s.collision_free() || s.photons() != photons || s.max_mode() >= modes) {
            throw InvalidArgument("sample " + s.to_string() + " is not a collision-free " + std::to_string(photons) +
                                  "-photon pattern over " + std::to_string(modes) + " modes");
        }
    }
}

std::vector<double> SampleSet::counts() const {
    std::vector<double> c(support_size(modes, photons), 0.0);
    for (const OccupationPattern &s : samples) {
        c[static_cast<std::size_t>(collision_free_rank(s, modes))] += 1.0;
    }
    return c;
}

SampleSet draw_samples(const OutcomeDistribution &dist, std::size_t n, std::uint64_t seed) {
    if (std::abs(dist.total() - 1.0) > 1e-9) {
        throw InvalidArgument("sampling needs a distribution that sums to 1; renormalize first");
    }
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::size_t> pick(dist.probs.begin(), dist.probs.end());
    std::vector<OccupationPattern> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(dist.patterns[pick(rng)]);
    }
    return SampleSet(dist.modes, dist.photons, std::move(out));
}

BootstrapDistance poisson_bootstrap_distance(std::span<const double> counts, std::span<const double> model,
                                             int trials, std::uint64_t seed, unsigned workers) {
    check_lengths(counts, model);
    if (trials < 2) {
        throw InvalidArgument("bootstrap needs at least two trials");
    }
    (void)normalized(counts);
    std::vector<double> distances(static_cast<std::size_t>(trials));
    if (workers == 0) {
        workers = std::max(1U, std::thread::hardware_concurrency());
    }
    parallel_for(distances.size(), workers, [&](std::size_t t) {
        std::seed_seq seq{static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(t)};
        std::mt19937_64 rng(seq);
        std::vector<double> resampled(counts.size());
        double total = 0.0;
        // An all-zero resample has no distribution; draw again.
        while (total == 0.0) {
            for (std::size_t j = 0; j < counts.size(); ++j) {
                resampled[j] = counts[j] > 0.0
                                   ? static_cast<double>(std::poisson_distribution<long long>(counts[j])(rng))
                                   : 0.0;
                total += resampled[j];
            }
        }
        for (double &c : resampled) {
            c /= total;
        }
        distances[t] = tvd(resampled, model);
    });
    const double mean = std::accumulate(distances.begin(), distances.end(), 0.0) / trials;
    double var = 0.0;
    for (double d : distances) {
        var += (d - mean) * (d - mean);
    }
    return {mean, std::sqrt(var / (trials - 1))};
}

OverlapFit fit_overlap(std::span<const double> counts, const SeriesTable &table, int k_max) {
    const std::vector<double> data = normalized(counts);
    const auto distance = [&](double x) {
        const OutcomeDistribution d = table.evaluate(x, k_max, Normalization::renormalized);
        return tvd(data, d.probs);
    };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0;
    double hi = 1.0;
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double fa = distance(a);
    double fb = distance(b);
    while (hi - lo >= 1e-4) {
        if (fa <= fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = distance(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = distance(b);
        }
    }
    OverlapFit best{0.5 * (lo + hi), distance(0.5 * (lo + hi))};
    for (double edge : {0.0, 1.0}) {
        const double d = distance(edge);
        if (d < best.distance) {
            best = {edge, d};
        }
    }
    return best;
}

LikelihoodCurve likelihood_ratio_curve(const SampleSet &samples, std::span<const double> model_a,
                                       std::span<const double> model_b) {
    check_lengths(model_a, model_b);
    if (model_a.size() != support_size(samples.modes, samples.photons)) {
        throw InvalidArgument("model distributions do not match the sample dimensions");
    }
    LikelihoodCurve curve;
    curve.values.reserve(samples.samples.size());
    double log_l = 0.0;
    bool zero = false;
    for (const OccupationPattern &s : samples.samples) {
        const auto r = static_cast<std::size_t>(collision_free_rank(s, samples.modes));
        const double a = model_a[r];
        const double b = model_b[r];
        if (a <= 0.0 && b <= 0.0) {
            throw InvalidArgument("sample " + s.to_string() + " has zero probability under both models");
        }
        if (a <= 0.0) {
            zero = true;
        } else if (b <= 0.0) {
            curve.divergent = true;
        } else {
            log_l += std::log(a) - std::log(b);
        }
        if (zero) {
            curve.values.push_back(0.0);
        } else if (curve.divergent) {
            curve.values.push_back(std::numeric_limits<double>::infinity());
        } else {
            curve.values.push_back(std::exp(log_l));
        }
    }
    if (!curve.values.empty() && !zero && !curve.divergent) {
        const std::vector<double> counts = samples.counts();
        double total = 0.0;
        for (std::size_t r = 0; r < counts.size(); ++r) {
            if (counts[r] > 0.0) {
                total += counts[r] * (std::log(model_a[r]) - std::log(model_b[r]));
            }
        }
        curve.values.back() = std::exp(total);
    }
    return curve;
}

}  // namespace photonsim
