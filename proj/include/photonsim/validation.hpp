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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "photonsim/interference.hpp"
#include "photonsim/patterns.hpp"

namespace photonsim {

// Distributions passed to this module are probability vectors aligned
// with collision_free_patterns(modes, photons).

/// (Σ_j √(p_j q_j))². Throws InvalidArgument on a length mismatch.
double fidelity(std::span<const double> p, std::span<const double> q);

/// ½ Σ_j |p_j - q_j|. Throws InvalidArgument on a length mismatch.
double tvd(std::span<const double> p, std::span<const double> q);

/// Detected collision-free events in acquisition order.
struct SampleSet {
    int modes = 0;
    int photons = 0;
    std::vector<OccupationPattern> samples;

    /// Validates every sample against the declared dimensions.
    SampleSet(int modes, int photons, std::vector<OccupationPattern> samples);
    SampleSet() = default;

    /// Count per collision-free pattern, in rank order.
    std::vector<double> counts() const;
};

/// i.i.d. draws from `dist`, which must sum to 1 within 1e-9.
SampleSet draw_samples(const OutcomeDistribution &dist, std::size_t n, std::uint64_t seed);

struct BootstrapDistance {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation over trials
};

/// Each trial replaces every count c by a Poisson(c) draw, renormalizes
/// and takes the tvd against `model`. Trial t uses a generator seeded
/// from (seed, t), so results do not depend on `workers`.
BootstrapDistance poisson_bootstrap_distance(std::span<const double> counts, std::span<const double> model,
                                             int trials, std::uint64_t seed, unsigned workers = 0);

/// Counts scaled to sum to 1. Throws InvalidArgument when all are zero.
std::vector<double> normalized(std::span<const double> counts);

struct OverlapFit {
    double x = 1.0;
    double distance = 0.0;
};

/// Uniform overlap x ∈ [0, 1] minimizing the tvd between the normalized
/// counts and the renormalized model of `table`, keeping series orders
/// up to `k_max` (k_max ≥ N for the full model). Golden-section search to
/// a bracket below 1e-4; both endpoints are also considered.
OverlapFit fit_overlap(std::span<const double> counts, const SeriesTable &table, int k_max);

struct LikelihoodCurve {
    /// L_t = ∏_{s ≤ t} A(s)/B(s), one entry per sample.
    std::vector<double> values;
    /// Some sample had B(s) = 0 < A(s); later entries are +inf unless A
    /// has already ruled the data out.
    bool divergent = false;
};

/**
 * Running likelihood ratio of model A against model B, accumulated in
 * log space. A(s) = 0 sets L to exactly 0 for the rest of the curve.
 * The final entry is recomputed from the aggregated counts so that it is
 * exactly independent of sample order.
 *
 * Throws InvalidArgument for a sample that neither model supports or for
 * distributions that do not match the sample dimensions.
 */
LikelihoodCurve likelihood_ratio_curve(const SampleSet &samples, std::span<const double> model_a,
                                       std::span<const double> model_b);

struct ModelComparison {
    std::string model;
    double distance = 0.0;
    double distance_mean = 0.0;
    double distance_std = 0.0;
    std::optional<double> x_fit;
};

}  // namespace photonsim
