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

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "photonsim/common.hpp"
#include "photonsim/patterns.hpp"
#include "photonsim/photon_models.hpp"
#include "photonsim/unitary_mesh.hpp"

namespace photonsim {

/// Perfectly indistinguishable photons.
struct Ideal {};

/// Arbitrary pairwise overlaps between the labelled photons.
struct Overlap {
    OverlapMatrix x;
};

/// Uniform real overlap x with the interference series cut after the
/// x^{k_max} term.
struct TruncatedUniform {
    double x = 1.0;
    int k_max = 0;
};

/// Distinguishability introduced by the circuit, given as a W tensor.
struct CircuitW {
    WTensor w;
};

using InterferenceModel = std::variant<Ideal, Overlap, TruncatedUniform, CircuitW>;

std::string model_kind(const InterferenceModel &model);

/// Largest photon number accepted by the series expansion (N!² terms).
inline constexpr int kMaxSeriesPhotons = 7;

/// Largest photon number accepted by `output_distribution`.
inline constexpr int kMaxDistributionPhotons = 8;

/// Incoherent mixture of input patterns with equal photon number.
class InputMixture {
public:
    struct Component {
        double weight;
        OccupationPattern pattern;
    };

    /// Weights must be non-negative and sum to 1 within 1e-12.
    explicit InputMixture(std::vector<Component> components);
    static InputMixture pure(OccupationPattern pattern);

    const std::vector<Component> &components() const { return components_; }
    int photons() const { return components_.front().pattern.photons(); }

private:
    std::vector<Component> components_;
};

enum class Normalization { physical, renormalized };

struct OutcomeDistribution {
    int modes = 0;
    int photons = 0;
    std::vector<OccupationPattern> patterns;  // lexicographic
    std::vector<double> probs;
    Normalization normalization = Normalization::physical;

    double total() const;
    /// Copy scaled to sum to 1. Throws InvalidArgument when the total is 0.
    OutcomeDistribution renormalized() const;
    /// Probability of `pattern`, 0 for patterns with collisions.
    double prob(const OccupationPattern &pattern) const;
};

/// Rows of `t` picked by the output pattern and columns by the input
/// pattern, each repeated by its multiplicity.
CMatrix build_submatrix(const TransferMatrix &t, const OccupationPattern &input, const OccupationPattern &output);

/**
 * Σ_{σ,ρ ∈ S_N} ∏_k G_k(σ_k, ρ_k) for N kernels G_k of size N×N. Every
 * model reduces to this form: for overlaps G_k(i, j) = A_{k,i} A*_{k,j} x_{ij},
 * for a W tensor G_k(i, j) = W_{i,j,out_k}. Evaluated as
 * Σ_σ perm(B_σ) with B_σ(k, j) = G_k(σ_k, j).
 */
Complex tensor_permanent(std::span<const CMatrix> kernels);

/**
 * Probability of detecting one photon in each mode of `output`.
 *
 * Photons are labelled by expanding `input` in nondecreasing mode order;
 * overlap matrices and W tensors are indexed by these labels. Every model
 * divides by ∏_j s_j! over the input multiplicities.
 *
 * Throws UnsupportedOutcome for outputs with collisions, InvalidArgument
 * for mismatched sizes, PrecisionError if a tensor-permanent result has
 * an imaginary part above 1e-10.
 */
double event_prob(const TransferMatrix &t, const OccupationPattern &input, const OccupationPattern &output,
                  const InterferenceModel &model);

/// P^{(0)}, P^{(1)}, …, P^{(N)}: the sum over permutation pairs that
/// disagree in exactly k places, normalised as in `event_prob`.
/// Σ_k x^k P^{(k)} is the uniform-overlap probability; P^{(1)} is always 0.
std::vector<double> series_coefficients(const TransferMatrix &t, const OccupationPattern &input,
                                        const OccupationPattern &output);

struct DistributionOptions {
    Normalization normalization = Normalization::physical;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;
};

/**
 * Probabilities of every collision-free outcome over all output modes of
 * `t`. A mixture gives the weighted sum of its components. The truncated
 * series can go negative for some outcomes; such values are reported as
 * 0. Results do not depend on the worker count.
 */
OutcomeDistribution output_distribution(const TransferMatrix &t, const InputMixture &input,
                                        const InterferenceModel &model, const DistributionOptions &options = {});

OutcomeDistribution output_distribution(const TransferMatrix &t, const OccupationPattern &input,
                                        const InterferenceModel &model, const DistributionOptions &options = {});

/// Total physical probability of collision-free outcomes.
double collision_free_fraction(const TransferMatrix &t, const InputMixture &input, const InterferenceModel &model);

/// Series coefficients for every collision-free outcome, so that
/// distributions of the uniform-overlap family can be re-evaluated
/// for many x without recomputing permanents.
class SeriesTable {
public:
    SeriesTable(const TransferMatrix &t, const InputMixture &input, const DistributionOptions &options = {});

    /// Distribution at overlap x keeping orders k ≤ k_max (k_max ≥ N for
    /// the full model).
    OutcomeDistribution evaluate(double x, int k_max, Normalization normalization) const;

    int photons() const { return photons_; }

private:
    int modes_;
    int photons_;
    std::vector<OccupationPattern> patterns_;
    std::vector<std::vector<double>> coeffs_;  // per pattern, mixture-weighted
};

}  // namespace photonsim
