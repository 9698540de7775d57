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
#include <vector>

#include "photonsim/common.hpp"
#include "photonsim/unitary_mesh.hpp"

namespace photonsim {

/// Single-photon counts: counts(j, k) for a photon injected at input j
/// and detected at output k.
struct CountTable {
    RMatrix counts;
};

/// |T_{k,j}| = √(counts(j,k) / Σ_k counts(j,k)). The result has one row
/// per output and one column per input; each column has unit norm since
/// input efficiencies cannot be observed.
RMatrix magnitudes_from_counts(const CountTable &table);

/// Visibility of the two-photon interference between inputs (input_a,
/// input_b) seen at outputs (output_a, output_b). Indices are 0-based
/// columns and rows of the transfer matrix.
struct VisibilityRecord {
    int input_a = 0;
    int input_b = 1;
    int output_a = 0;
    int output_b = 1;
    double visibility = 0.0;
    double sigma = 1.0;
};

/// |V| never exceeds x² ≤ 1 under the (C - Q)/C definition, so anti-dips
/// reach at most -1.
inline constexpr double kMaxAntiDip = 1.0;

/**
 * V = (C - Q) / C, where C = |T_ki T_lj|² + |T_li T_kj|² is the coincidence
 * probability of fully distinguishable photons and Q the coincidence
 * probability at uniform overlap x. A dip gives V > 0, an anti-dip V < 0.
 *
 * Throws UndefinedVisibility when C = 0 and InvalidArgument for repeated
 * or out-of-range indices.
 */
double hom_visibility(const TransferMatrix &t, int input_a, int input_b, int output_a, int output_b, double x);

struct VisibilitySet {
    std::vector<VisibilityRecord> records;
    int omitted = 0;  // pairs with undefined visibility
};

/// One record per pair of `inputs` and pair of output modes, with
/// Gaussian noise of standard deviation `sigma` added (and clamped to
/// [-1, 1]). With sigma = 0 the records carry `hom_visibility` exactly and
/// a nominal uncertainty of 1.
VisibilitySet synth_visibility_set(const TransferMatrix &t, const std::vector<int> &inputs, double x, double sigma,
                                   std::uint64_t seed);

struct RetrievalOptions {
    double x_assumed = 1.0;
    int restarts = 20;
    std::uint64_t seed = 0;
    int max_iterations = 300;
    unsigned workers = 0;  // 0 = hardware concurrency
    bool record_trace = false;
};

struct CharacterizationResult {
    TransferMatrix matrix;  // gauge-fixed, canonical conjugation
    double residual = 0.0;  // Σ (V_model - V)² / σ²
    int n_restarts_used = 0;
    bool converged = false;  // gradient norm < 1e-8 at the optimum
    double gradient_norm = 0.0;
    int best_restart = 0;
    std::vector<double> objective_trace;  // accepted steps of the best restart, if recorded
};

/**
 * Recovers the phases of a transfer matrix with known magnitudes by
 * weighted least squares on the visibilities (the maximum-likelihood fit
 * under Gaussian visibility noise).
 *
 * Phases of the first row and column are fixed to zero. The data cannot
 * tell T from T*, so the returned matrix is the representative whose
 * first free phase outside {0, π} lies in (0, π).
 *
 * Throws UnderDetermined with fewer records than free phases.
 */
CharacterizationResult retrieve_phases(const RMatrix &magnitudes, const std::vector<VisibilityRecord> &records,
                                       const RetrievalOptions &options = {});

/// Weighted objective Σ (V_model - V)² / σ² for the matrix `t`.
double visibility_objective(const TransferMatrix &t, const std::vector<VisibilityRecord> &records, double x);

/// Applies the conjugation convention used by `retrieve_phases` to a
/// gauge-fixed matrix.
TransferMatrix canonical_conjugation(const TransferMatrix &gauge_fixed);

}  // namespace photonsim
