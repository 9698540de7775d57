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

#include "photonsim/patterns.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace photonsim {

OccupationPattern OccupationPattern::from_modes(std::vector<int> modes) {
    std::sort(modes.begin(), modes.end());
    OccupationPattern p;
    for (int m : modes) {
        if (m < 0) {
            throw InvalidArgument("negative mode index " + std::to_string(m));
        }
        if (!p.occupations_.empty() && p.occupations_.back().mode == m) {
            ++p.occupations_.back().count;
        } else {
            p.occupations_.push_back({m, 1});
        }
    }
    return p;
}

OccupationPattern OccupationPattern::from_occupations(std::vector<Occupation> occupations) {
    for (std::size_t k = 0; k < occupations.size(); ++k) {
        if (occupations[k].mode < 0 || occupations[k].count < 1) {
            throw InvalidArgument("occupation needs a non-negative mode and multiplicity >= 1");
        }
        if (k > 0 && occupations[k].mode <= occupations[k - 1].mode) {
            throw InvalidArgument("occupation modes must be strictly increasing");
        }
    }
    OccupationPattern p;
    p.occupations_ = std::move(occupations);
    return p;
}

int OccupationPattern::photons() const {
    return std::accumulate(occupations_.begin(), occupations_.end(), 0,
                           [](int acc, const Occupation &o) { return acc + o.count; });
}

bool OccupationPattern::collision_free() const {
    return std::all_of(occupations_.begin(), occupations_.end(), [](const Occupation &o) { return o.count == 1; });
}

std::vector<int> OccupationPattern::expanded_modes() const {
    std::vector<int> modes;
    for (const Occupation &o : occupations_) {
        modes.insert(modes.end(), static_cast<std::size_t>(o.count), o.mode);
    }
    return modes;
}

int OccupationPattern::max_mode() const { return occupations_.empty() ? -1 : occupations_.back().mode; }

double OccupationPattern::multiplicity_factorial() const {
    double f = 1.0;
    for (const Occupation &o : occupations_) {
        for (int k = 2; k <= o.count; ++k) {
            f *= k;
        }
    }
    return f;
}

std::string OccupationPattern::to_string() const {
    std::string s;
    for (int m : expanded_modes()) {
        if (!s.empty()) {
            s += ',';
        }
        s += std::to_string(m + 1);
    }
    return s;
}

OccupationPattern OccupationPattern::parse(const std::string &text) {
    std::vector<int> modes;
    const char *p = text.data();
    const char *end = p + text.size();
    while (p < end) {
        int value = 0;
        auto [next, ec] = std::from_chars(p, end, value);
        if (ec != std::errc() || value < 1) {
            throw InvalidArgument("bad pattern '" + text + "': expected comma-separated 1-based modes");
        }
        modes.push_back(value - 1);
        p = next;
        if (p < end) {
            if (*p != ',') {
                throw InvalidArgument("bad pattern '" + text + "': expected ','");
            }
            ++p;
            if (p == end) {
                throw InvalidArgument("bad pattern '" + text + "': trailing ','");
            }
        }
    }
    if (modes.empty()) {
        throw InvalidArgument("empty pattern");
    }
    return from_modes(std::move(modes));
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

std::vector<OccupationPattern> collision_free_patterns(int modes, int photons) {
    if (modes < 0 || photons < 0) {
        throw InvalidArgument("negative mode or photon count");
    }
    std::vector<OccupationPattern> out;
    if (photons > modes) {
        return out;
    }
    out.reserve(binomial(modes, photons));
    std::vector<int> idx(static_cast<std::size_t>(photons));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        std::vector<Occupation> occ;
        occ.reserve(idx.size());
        for (int m : idx) {
            occ.push_back({m, 1});
        }
        out.push_back(OccupationPattern::from_occupations(std::move(occ)));
        int k = photons - 1;
        while (k >= 0 && idx[static_cast<std::size_t>(k)] == modes - photons + k) {
            --k;
        }
        if (k < 0) {
            break;
        }
        ++idx[static_cast<std::size_t>(k)];
        for (int j = k + 1; j < photons; ++j) {
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return out;
}

std::int64_t collision_free_rank(const OccupationPattern &pattern, int modes) {
    if (!pattern.collision_free()) {
        return -1;
    }
    const std::vector<int> idx = pattern.expanded_modes();
    const int n = static_cast<int>(idx.size());
    // lexicographic rank: count combinations that precede idx
    std::uint64_t rank = 0;
    int prev = -1;
    for (int k = 0; k < n; ++k) {
        for (int v = prev + 1; v < idx[static_cast<std::size_t>(k)]; ++v) {
            rank += binomial(modes - v - 1, n - k - 1);
        }
        prev = idx[static_cast<std::size_t>(k)];
    }
    return static_cast<std::int64_t>(rank);
}

}  // namespace photonsim
