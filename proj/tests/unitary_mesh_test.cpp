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

#include "photonsim/unitary_mesh.hpp"

#include <gtest/gtest.h>

#include <random>

#include "stats.hpp"

using namespace photonsim;

namespace {

double unitarity_error(const CMatrix &u) {
    return max_abs(u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols()));
}

CMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = Complex(g(rng), g(rng));
    }
    return m;
}

}  // namespace

TEST(haar_random, one_mode_is_a_phase) {
    const TransferMatrix u = haar_random(1, 42);
    ASSERT_EQ(u.entries.rows(), 1);
    EXPECT_NEAR(std::abs(u.entries(0, 0)), 1.0, 1e-14);
}

TEST(haar_random, unitary_and_deterministic) {
    for (int n : {2, 5, 13}) {
        const TransferMatrix a = haar_random(n, 9);
        EXPECT_LT(unitarity_error(a.entries), 1e-10);
        EXPECT_EQ(a.entries, haar_random(n, 9).entries);
        EXPECT_NE(a.entries, haar_random(n, 10).entries);
    }
}

TEST(haar_random, zero_modes_rejected) { EXPECT_THROW(haar_random(0, 1), InvalidArgument); }

TEST(haar_random, first_entry_mean_is_one_over_n) {
    constexpr int kDraws = 10000;
    constexpr int n = 8;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int s = 0; s < kDraws; ++s) {
        const double p = std::norm(haar_random(n, static_cast<std::uint64_t>(s)).entries(0, 0));
        sum += p;
        sum2 += p * p;
    }
    const double mean = sum / kDraws;
    const double se = std::sqrt((sum2 / kDraws - mean * mean) / kDraws);
    EXPECT_LT(std::abs(mean - 1.0 / n), 3.0 * se);
}

TEST(mesh_to_matrix, balanced_coupler) {
    MeshParams p{2, {{0, 0, 0.5, 0.0}}, {0.0, 0.0}};
    const CMatrix u = mesh_to_matrix(p).entries;
    for (Eigen::Index i = 0; i < 4; ++i) {
        EXPECT_NEAR(std::abs(u.data()[i]), 1.0 / std::sqrt(2.0), 1e-15);
    }
}

TEST(mesh_to_matrix, bar_state_mesh_is_identity) {
    MeshParams p = square_mesh_layout(6);
    for (Coupler &c : p.couplers) {
        c.transmissivity = 1.0;
        c.phase = 0.0;
    }
    const CMatrix u = mesh_to_matrix(p).entries;
    EXPECT_LT(unitarity_error(u), 1e-12);
    EXPECT_LT(max_abs(u - CMatrix::Identity(6, 6)), 1e-15);
}

TEST(mesh_to_matrix, cross_state_swaps_modes) {
    MeshParams p{2, {{0, 0, 0.0, 0.0}}, {0.0, 0.0}};
    const CMatrix u = mesh_to_matrix(p).entries;
    EXPECT_NEAR(std::abs(u(1, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(u(0, 1)), 1.0, 1e-15);
}

TEST(mesh_to_matrix, fifteen_modes_use_105_couplers) {
    EXPECT_EQ(full_mesh_coupler_count(15), 105);
    EXPECT_EQ(square_mesh_layout(15).couplers.size(), 105U);
    EXPECT_EQ(sample_haar_mesh(15, 1).couplers.size(), 105U);
}

TEST(mesh_to_matrix, random_valid_meshes_are_unitary) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int n = 2; n <= 9; ++n) {
        MeshParams p = square_mesh_layout(n);
        for (Coupler &c : p.couplers) {
            c.transmissivity = u01(rng);
            c.phase = kTwoPi * u01(rng) * 0.999;
        }
        for (double &ph : p.output_phases) {
            ph = kTwoPi * u01(rng) * 0.999;
        }
        EXPECT_LT(unitarity_error(mesh_to_matrix(p).entries), 1e-12);
    }
}

TEST(mesh_to_matrix, overlapping_couplers_rejected) {
    MeshParams p{3, {{0, 0, 0.5, 0.0}, {0, 1, 0.5, 0.0}}, {0.0, 0.0, 0.0}};
    EXPECT_THROW(mesh_to_matrix(p), InvalidArgument);
}

TEST(mesh_to_matrix, out_of_range_values_rejected) {
    EXPECT_THROW(mesh_to_matrix({2, {{0, 0, 1.5, 0.0}}, {0.0, 0.0}}), InvalidArgument);
    EXPECT_THROW(mesh_to_matrix({2, {{0, 0, 0.5, kTwoPi}}, {0.0, 0.0}}), InvalidArgument);
    EXPECT_THROW(mesh_to_matrix({2, {{0, 1, 0.5, 0.0}}, {0.0, 0.0}}), InvalidArgument);
    EXPECT_THROW(mesh_to_matrix({2, {{0, 0, 0.5, 0.0}}, {0.0}}), InvalidArgument);
}

TEST(sample_haar_mesh, coupler_counts_and_ranges) {
    EXPECT_THROW(sample_haar_mesh(1, 0), InvalidArgument);
    EXPECT_EQ(sample_haar_mesh(5, 2).couplers.size(), 10U);
    const MeshParams p = sample_haar_mesh(7, 11);
    EXPECT_NO_THROW(validate_mesh(p));
    EXPECT_EQ(p.output_phases.size(), 7U);
    EXPECT_LT(unitarity_error(mesh_to_matrix(p).entries), 1e-12);
}

TEST(sample_haar_mesh, exponents_cover_every_position) {
    for (int n = 2; n <= 10; ++n) {
        const std::vector<int> beta = haar_mesh_exponents(n);
        ASSERT_EQ(static_cast<int>(beta.size()), full_mesh_coupler_count(n));
        for (int b : beta) {
            EXPECT_GE(b, 1);
            EXPECT_LE(b, n);
        }
    }
}

// One two-sample KS test per n. Draw s reads entry s mod n² so every
// mesh position is exercised while draws stay independent; under the Haar
// measure all entries share one marginal.
TEST(sample_haar_mesh, matches_haar_random_ensemble) {
    constexpr int kDraws = 10000;
    for (int n : {2, 4, 8}) {
        std::vector<double> mesh;
        std::vector<double> direct;
        for (int s = 0; s < kDraws; ++s) {
            const int e = s % (n * n);
            mesh.push_back(std::norm(mesh_to_matrix(sample_haar_mesh(n, 1000000 + s)).entries(e / n, e % n)));
            direct.push_back(std::norm(haar_random(n, 2000000 + s).entries(e / n, e % n)));
        }
        EXPECT_LT(teststats::ks_statistic(mesh, direct), teststats::ks_critical(0.01, kDraws, kDraws)) << "n=" << n;
    }
}

TEST(clements_decompose, identity_gives_bar_states) {
    const MeshParams p = clements_decompose({CMatrix::Identity(4, 4), ""});
    for (const Coupler &c : p.couplers) {
        EXPECT_EQ(c.transmissivity, 1.0);
    }
    EXPECT_LT(max_abs(mesh_to_matrix(p).entries - CMatrix::Identity(4, 4)), 1e-10);
}

TEST(clements_decompose, round_trip_many_sizes) {
    for (int n = 2; n <= 10; ++n) {
        for (int s = 0; s < 100; ++s) {
            const TransferMatrix u = haar_random(n, static_cast<std::uint64_t>(1000 * n + s));
            const MeshParams p = clements_decompose(u);
            ASSERT_EQ(static_cast<int>(p.couplers.size()), full_mesh_coupler_count(n));
            ASSERT_LT(max_abs(mesh_to_matrix(p).entries - u.entries), 1e-8) << "n=" << n << " s=" << s;
        }
    }
}

TEST(clements_decompose, fifteen_modes) {
    const TransferMatrix u = haar_random(15, 77);
    const MeshParams p = clements_decompose(u);
    EXPECT_EQ(p.couplers.size(), 105U);
    EXPECT_LT(max_abs(mesh_to_matrix(p).entries - u.entries), 1e-8);
}

TEST(clements_decompose, rejects_bad_input) {
    EXPECT_THROW(clements_decompose({CMatrix::Ones(2, 3), ""}), InvalidArgument);
    EXPECT_THROW(clements_decompose({CMatrix::Ones(3, 3), ""}), InvalidArgument);
}

TEST(fix_gauge, first_row_and_column_real_nonnegative) {
    const TransferMatrix t{random_complex(13, 4, 5), ""};
    const GaugeFixed g = fix_gauge(t);
    EXPECT_FALSE(g.partial);
    for (Eigen::Index k = 0; k < 13; ++k) {
        EXPECT_LT(std::abs(g.matrix.entries(k, 0).imag()), 1e-12);
        EXPECT_GE(g.matrix.entries(k, 0).real(), 0.0);
    }
    for (Eigen::Index j = 0; j < 4; ++j) {
        EXPECT_LT(std::abs(g.matrix.entries(0, j).imag()), 1e-12);
        EXPECT_GE(g.matrix.entries(0, j).real(), 0.0);
    }
    EXPECT_LT((g.matrix.entries.cwiseAbs() - t.entries.cwiseAbs()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(fix_gauge, idempotent_and_phase_invariant) {
    const TransferMatrix t{random_complex(5, 5, 6), ""};
    const CMatrix once = fix_gauge(t).matrix.entries;
    EXPECT_LT(max_abs(fix_gauge({once, ""}).matrix.entries - once), 1e-15);
    const CMatrix rotated = fix_gauge({t.entries * std::polar(1.0, 0.7), ""}).matrix.entries;
    EXPECT_LT(max_abs(rotated - once), 1e-12);
}

TEST(fix_gauge, absorbs_input_and_output_phases) {
    const TransferMatrix t{random_complex(6, 4, 8), ""};
    const CMatrix d_out = Eigen::VectorXcd::NullaryExpr(6, [](Eigen::Index i) {
                              return std::polar(1.0, 0.3 * static_cast<double>(i) + 0.1);
                          }).asDiagonal();
    const CMatrix d_in = Eigen::VectorXcd::NullaryExpr(4, [](Eigen::Index i) {
                             return std::polar(1.0, -1.1 * static_cast<double>(i));
                         }).asDiagonal();
    EXPECT_LT(max_abs(fix_gauge({d_out * t.entries * d_in, ""}).matrix.entries - fix_gauge(t).matrix.entries),
              1e-12);
}

TEST(fix_gauge, zero_entry_marks_partial) {
    CMatrix m = random_complex(3, 3, 9);
    m(0, 2) = 0.0;
    const GaugeFixed g = fix_gauge({m, ""});
    EXPECT_TRUE(g.partial);
    EXPECT_LT((g.matrix.entries.cwiseAbs() - m.cwiseAbs()).cwiseAbs().maxCoeff(), 1e-12);
}
