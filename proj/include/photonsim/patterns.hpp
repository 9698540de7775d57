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
#include <string>
#include <vector>

#include "photonsim/common.hpp"

namespace photonsim {

struct Occupation {
    int mode = 0;  // 0-based
    int count = 1;

    friend bool operator==(const Occupation &, const Occupation &) = default;
    friend auto operator<=>(const Occupation &, const Occupation &) = default;
};

/// Multiset of modes. Mode indices are 0-based internally; text formats
/// use 1-based numbering.
class OccupationPattern {
public:
    OccupationPattern() = default;

    /// Builds from a list of modes; repeats become multiplicities.
    static OccupationPattern from_modes(std::vector<int> modes);

    /// Builds from explicit (mode, multiplicity) pairs. Modes must be
    /// strictly increasing and multiplicities at least 1.
    static OccupationPattern from_occupations(std::vector<Occupation> occupations);

    const std::vector<Occupation> &occupations() const { return occupations_; }
    int photons() const;
    bool collision_free() const;
    /// One entry per photon, nondecreasing: the labelling used by overlap
    /// matrices and W tensors.
    std::vector<int> expanded_modes() const;
    /// Largest mode index, or -1 when empty.
    int max_mode() const;
    /// ∏ s_j! over the multiplicities.
    double multiplicity_factorial() const;

    /// "1,2,2,5": 1-based, comma-joined, one entry per photon.
    std::string to_string() const;
    /// Parses the `to_string` form; throws InvalidArgument.
    static OccupationPattern parse(const std::string &text);

    friend bool operator==(const OccupationPattern &, const OccupationPattern &) = default;
    friend auto operator<=>(const OccupationPattern &, const OccupationPattern &) = default;

private:
    std::vector<Occupation> occupations_;
};

std::uint64_t binomial(int n, int k);

/// All collision-free patterns of `photons` photons in `modes` modes, in
/// lexicographic order of their mode lists.
std::vector<OccupationPattern> collision_free_patterns(int modes, int photons);

/// Index of a collision-free pattern in `collision_free_patterns(modes, N)`
/// (combinatorial number system), or -1 if the pattern has collisions.
std::int64_t collision_free_rank(const OccupationPattern &pattern, int modes);

}  // namespace photonsim
