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

#include "photonsim/common.hpp"

namespace photonsim {

/// Largest matrix accepted by `permanent`.
inline constexpr int kMaxPermanentSize = 30;

/// Largest matrix accepted by `permanent_naive`.
inline constexpr int kMaxNaivePermanentSize = 10;

/**
 * Matrix permanent by Glynn's formula,
 *
 *   perm(A) = 2^{1-n} Σ_δ (∏_k δ_k) ∏_j Σ_i δ_i a_{ij},   δ ∈ {±1}^n, δ_0 = 1,
 *
 * walking the sign vectors in Gray-code order so each step updates the
 * column sums with one row (O(2^{n-1} n) total).
 *
 * Error model: column sums and the running total are kept in
 * `long double` complex. Every term is bounded by ∏_j ‖a_{·j}‖_1 and the
 * sum is averaged over 2^{n-1} terms, so the absolute error is
 * O(n ε_ld ∏_j ‖a_{·j}‖_1) however much the terms cancel. The relative
 * error of a near-zero permanent can still be large.
 */
Complex permanent(const CMatrix &a);

/// Sum over all n! permutations. Test oracle; n ≤ kMaxNaivePermanentSize.
Complex permanent_naive(const CMatrix &a);

}  // namespace photonsim
