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

// Brute-force reference for multi-photon interference. Each photon j is a
// creation operator Σ_{k,a} U(k, in_j) ψ_j(a) b†_{k,a} acting on the joint
// (spatial mode, internal state) space; the product is expanded term by
// term into Fock states and normalized by the input state's own norm.
// Shares no code with the library beyond the matrix types.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

// Internal-state vectors ψ_j (rows) whose Gram matrix Σ_a ψ_j(a) ψ*_k(a)
// reproduces `x`.
inline CMatrix internal_states(const CMatrix &x) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(x);
    const Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
    const CMatrix full = es.eigenvectors() * vals.cwiseSqrt().asDiagonal();
    // Null directions carry no amplitude; dropping them keeps the
    // expansion small.
    std::vector<Eigen::Index> keep;
    for (Eigen::Index a = 0; a < vals.size(); ++a) {
        if (vals(a) > 1e-13) {
            keep.push_back(a);
        }
    }
    CMatrix psi(full.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        psi.col(static_cast<Eigen::Index>(c)) = full.col(keep[c]);
    }
    return psi;
}

// Output photon-number distribution over spatial modes. Keys list the
// output mode of every photon in nondecreasing order (0-based).
inline std::map<std::vector<int>, double> fock_distribution(const CMatrix &u, const std::vector<int> &inputs,
                                                            const CMatrix &overlap) {
    const int n = static_cast<int>(inputs.size());
    const int modes = static_cast<int>(u.rows());
    const CMatrix psi = internal_states(overlap);
    const int dim = static_cast<int>(psi.cols());
    const int joint = modes * dim;

    // Σ over ordered assignments of photons to joint modes; equal
    // multisets of joint modes are the same Fock state.
    std::map<std::vector<int>, Complex> amps;
    std::vector<int> slot(static_cast<std::size_t>(n), 0);
    for (;;) {
        Complex c = 1.0;
        for (int j = 0; j < n; ++j) {
            const int k = slot[j] / dim;
            const int a = slot[j] % dim;
            c *= u(k, inputs[j]) * psi(j, a);
        }
        if (c != Complex(0.0)) {
            std::vector<int> key = slot;
            std::sort(key.begin(), key.end());
            amps[key] += c;
        }
        int pos = 0;
        while (pos < n && ++slot[pos] == joint) {
            slot[pos++] = 0;
        }
        if (pos == n) {
            break;
        }
    }

    // ⟨in|in⟩ = Σ_π ∏_j [in_j = in_π(j)] ⟨ψ_π(j)|ψ_j⟩
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        perm[j] = j;
    }
    Complex norm = 0.0;
    do {
        Complex term = 1.0;
        for (int j = 0; j < n && term != Complex(0.0); ++j) {
            term *= inputs[j] == inputs[perm[j]] ? overlap(j, perm[j]) : Complex(0.0);
        }
        norm += term;
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::map<std::vector<int>, double> out;
    for (const auto &[key, amp] : amps) {
        // |b†…|0⟩|² = ∏ n_{k,a}!
        double fact = 1.0;
        for (std::size_t i = 0; i < key.size();) {
            std::size_t run = 1;
            while (i + run < key.size() && key[i + run] == key[i]) {
                ++run;
            }
            for (std::size_t r = 2; r <= run; ++r) {
                fact *= static_cast<double>(r);
            }
            i += run;
        }
        std::vector<int> spatial;
        for (int s : key) {
            spatial.push_back(s / dim);
        }
        std::sort(spatial.begin(), spatial.end());
        out[spatial] += std::norm(amp) * fact / norm.real();
    }
    return out;
}

inline CMatrix ones(int n) { return CMatrix::Ones(n, n); }

}  // namespace oracle
