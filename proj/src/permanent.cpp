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

#include "photonsim/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace photonsim {

namespace {

using LComplex = std::complex<long double>;

void require_square(const CMatrix &a, int ceiling) {
    if (a.rows() != a.cols()) {
        throw InvalidArgument("permanent needs a square matrix, got " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()));
    }
    if (a.rows() > ceiling) {
        throw InvalidArgument("permanent size " + std::to_string(a.rows()) + " exceeds ceiling " +
                              std::to_string(ceiling));
    }
}

}  // namespace

Complex permanent(const CMatrix &a) {
    require_square(a, kMaxPermanentSize);
    const int n = static_cast<int>(a.rows());
    if (n == 0) {
        return {1.0, 0.0};
    }
    if (n == 1) {
        return a(0, 0);
    }

    std::vector<LComplex> row(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            row[static_cast<std::size_t>(i * n + j)] = LComplex(a(i, j).real(), a(i, j).imag());
        }
    }
    // column sums with every δ = +1
    std::vector<LComplex> sums(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        LComplex s = 0;
        for (int i = 0; i < n; ++i) {
            s += row[static_cast<std::size_t>(i * n + j)];
        }
        sums[static_cast<std::size_t>(j)] = s;
    }
    const auto product = [&sums]() {
        LComplex p = 1;
        for (const LComplex &s : sums) {
            p *= s;
        }
        return p;
    };

    LComplex total = product();
    const std::uint64_t steps = std::uint64_t{1} << (n - 1);
    std::uint64_t gray = 0;
    for (std::uint64_t k = 1; k < steps; ++k) {
        const int bit = std::countr_zero(k);
        gray ^= std::uint64_t{1} << bit;
        const bool negative = (gray >> bit) & 1U;
        const LComplex *r = &row[static_cast<std::size_t>((bit + 1) * n)];
        const long double scale = negative ? -2.0L : 2.0L;
        for (int j = 0; j < n; ++j) {
            sums[static_cast<std::size_t>(j)] += scale * r[j];
        }
        const LComplex term = product();
        if (std::popcount(gray) % 2 == 0) {
            total += term;
        } else {
            total -= term;
        }
    }
    total /= static_cast<long double>(steps);
    return {static_cast<double>(total.real()), static_cast<double>(total.imag())};
}

Complex permanent_naive(const CMatrix &a) {
    require_square(a, kMaxNaivePermanentSize);
    const int n = static_cast<int>(a.rows());
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    Complex total = 0;
    do {
        Complex p = 1;
        for (int i = 0; i < n; ++i) {
            p *= a(i, perm[static_cast<std::size_t>(i)]);
        }
        total += p;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

}  // namespace photonsim
