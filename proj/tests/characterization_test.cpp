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

#include "photonsim/characterization.hpp"

#include <gtest/gtest.h>

#include <random>

#include "photonsim/interference.hpp"

using namespace photonsim;

namespace {

TransferMatrix columns(const TransferMatrix &t, int n) { return {t.entries.leftCols(n), t.label}; }

TransferMatrix truth_of(const TransferMatrix &t) { return canonical_conjugation(fix_gauge(t).matrix); }

RMatrix moduli(const TransferMatrix &t) { return t.entries.cwiseAbs(); }

}  // namespace

TEST(magnitudes_from_counts, balanced_row) {
    CountTable c{RMatrix::Ones(1, 2)};
    const RMatrix m = magnitudes_from_counts(c);
    ASSERT_EQ(m.rows(), 2);
    EXPECT_NEAR(m(0, 0), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(m(1, 0), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(magnitudes_from_counts, noiseless_rates_recover_moduli) {
    const TransferMatrix t = haar_random(7, 2);
    const RMatrix rates = 3.7 * t.entries.cwiseAbs2().transpose();
    EXPECT_LT((magnitudes_from_counts({rates}) - moduli(t)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(magnitudes_from_counts, poisson_counts_concentrate) {
    const TransferMatrix t = columns(haar_random(13, 3), 4);
    const RMatrix rates = 1e4 * t.entries.cwiseAbs2().transpose();
    std::mt19937_64 rng(4);
    int good = 0;
    for (int trial = 0; trial < 100; ++trial) {
        RMatrix counts(rates.rows(), rates.cols());
        for (Eigen::Index i = 0; i < counts.size(); ++i) {
            counts.data()[i] = static_cast<double>(std::poisson_distribution<long>(rates.data()[i])(rng));
        }
        good += (magnitudes_from_counts({counts}) - moduli(t)).cwiseAbs().maxCoeff() < 0.03;
    }
    EXPECT_GE(good, 95);
}

TEST(magnitudes_from_counts, errors) {
    RMatrix c = RMatrix::Ones(2, 3);
    c.row(1).setZero();
    EXPECT_THROW(magnitudes_from_counts({c}), InvalidArgument);
    c.row(1).setConstant(-1.0);
    EXPECT_THROW(magnitudes_from_counts({c}), InvalidArgument);
}

TEST(hom_visibility, balanced_splitter) {
    const TransferMatrix bs{coupler_block(0.5, 0.0), "bs"};
    EXPECT_NEAR(hom_visibility(bs, 0, 1, 0, 1, 1.0), 1.0, 1e-15);
    for (int i = 0; i <= 20; ++i) {
        const double x = i / 20.0;
        EXPECT_NEAR(hom_visibility(bs, 0, 1, 0, 1, x), x * x, 1e-12);
    }
}

TEST(hom_visibility, diagonal_transfer_has_no_dip) {
    const TransferMatrix d{CMatrix::Identity(2, 2), ""};
    EXPECT_EQ(hom_visibility(d, 0, 1, 0, 1, 1.0), 0.0);
}

TEST(hom_visibility, matches_two_photon_probabilities) {
    const TransferMatrix t = haar_random(6, 5);
    const OccupationPattern in = OccupationPattern::from_modes({1, 4});
    const OccupationPattern out = OccupationPattern::from_modes({0, 3});
    for (double x : {0.0, 0.4, 1.0}) {
        const double c = event_prob(t, in, out, Overlap{uniform_overlap(2, 0.0)});
        const double q = event_prob(t, in, out, Overlap{uniform_overlap(2, x)});
        EXPECT_NEAR(hom_visibility(t, 1, 4, 0, 3, x), (c - q) / c, 1e-12);
    }
}

TEST(hom_visibility, range_and_errors) {
    const TransferMatrix t = haar_random(5, 6);
    for (int k = 0; k < 5; ++k) {
        for (int l = k + 1; l < 5; ++l) {
            const double v = hom_visibility(t, 0, 2, k, l, 1.0);
            EXPECT_LE(v, 1.0 + 1e-15);
            EXPECT_GE(v, -kMaxAntiDip - 1e-15);
        }
    }
    const TransferMatrix id{CMatrix::Identity(3, 3), ""};
    EXPECT_THROW(hom_visibility(id, 0, 1, 0, 2, 1.0), UndefinedVisibility);
    EXPECT_THROW(hom_visibility(t, 0, 0, 0, 1, 1.0), InvalidArgument);
    EXPECT_THROW(hom_visibility(t, 0, 1, 0, 5, 1.0), InvalidArgument);
}

TEST(synth_visibility_set, record_counts) {
    const std::vector<int> four{0, 1, 2, 3};
    EXPECT_EQ(synth_visibility_set(columns(haar_random(13, 1), 4), four, 1.0, 0.0, 0).records.size(), 468U);
    EXPECT_EQ(synth_visibility_set(columns(haar_random(15, 1), 4), four, 1.0, 0.0, 0).records.size(), 630U);
    EXPECT_THROW(synth_visibility_set(haar_random(3, 1), {0}, 1.0, 0.0, 0), InvalidArgument);
}

TEST(synth_visibility_set, noiseless_records_are_exact) {
    const TransferMatrix t = columns(haar_random(8, 2), 3);
    for (const VisibilityRecord &r : synth_visibility_set(t, {0, 1, 2}, 0.9, 0.0, 0).records) {
        EXPECT_EQ(r.visibility, hom_visibility(t, r.input_a, r.input_b, r.output_a, r.output_b, 0.9));
        EXPECT_LT(r.input_a, r.input_b);
        EXPECT_LT(r.output_a, r.output_b);
        EXPECT_GT(r.sigma, 0.0);
    }
}

TEST(synth_visibility_set, undefined_pairs_are_counted) {
    const VisibilitySet s = synth_visibility_set({CMatrix::Identity(3, 3), ""}, {0, 1}, 1.0, 0.0, 0);
    EXPECT_EQ(s.records.size(), 1U);
    EXPECT_EQ(s.omitted, 2);
}

TEST(retrieve_phases, balanced_splitter) {
    const TransferMatrix bs{coupler_block(0.5, 0.0), "bs"};
    const VisibilitySet s = synth_visibility_set(bs, {0, 1}, 1.0, 0.0, 0);
    const CharacterizationResult r = retrieve_phases(moduli(bs), s.records);
    EXPECT_LT(r.residual, 1e-12);
    EXPECT_LT(max_abs(r.matrix.entries - truth_of(bs).entries), 1e-6);
}

TEST(retrieve_phases, noiseless_thirteen_by_four) {
    const TransferMatrix t = columns(haar_random(13, 2024), 4);
    const VisibilitySet s = synth_visibility_set(t, {0, 1, 2, 3}, 1.0, 0.0, 0);
    const CharacterizationResult r = retrieve_phases(moduli(t), s.records, {.seed = 1});
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.n_restarts_used, 20);
    EXPECT_LT(max_abs(r.matrix.entries - truth_of(t).entries), 1e-6);
    EXPECT_LT(max_abs(fix_gauge(r.matrix).matrix.entries - r.matrix.entries), 1e-15);
}

TEST(retrieve_phases, noisy_thirteen_by_four) {
    const TransferMatrix t = columns(haar_random(13, 77), 4);
    const VisibilitySet s = synth_visibility_set(t, {0, 1, 2, 3}, 1.0, 0.01, 5);
    const CharacterizationResult r = retrieve_phases(moduli(t), s.records, {.seed = 2});
    EXPECT_LT(max_abs(r.matrix.entries - truth_of(t).entries), 0.05);
    const double dof = static_cast<double>(s.records.size()) - 12.0 * 3.0;
    EXPECT_GT(r.residual, dof / 2.0);
    EXPECT_LT(r.residual, dof * 2.0);
}

TEST(retrieve_phases, small_instances_fit_exactly) {
    for (int i = 0; i < 20; ++i) {
        const int m = 4 + i % 5;
        const TransferMatrix t = columns(haar_random(m, 400 + i), 4);
        const VisibilitySet s = synth_visibility_set(t, {0, 1, 2, 3}, 1.0, 0.0, 0);
        const CharacterizationResult r = retrieve_phases(moduli(t), s.records, {.seed = static_cast<std::uint64_t>(i)});
        EXPECT_LT(r.residual, 1e-10) << "m=" << m;
    }
}

TEST(retrieve_phases, objective_never_increases) {
    const TransferMatrix t = columns(haar_random(9, 8), 4);
    const VisibilitySet s = synth_visibility_set(t, {0, 1, 2, 3}, 1.0, 0.02, 1);
    RetrievalOptions o;
    o.record_trace = true;
    const CharacterizationResult r = retrieve_phases(moduli(t), s.records, o);
    ASSERT_GT(r.objective_trace.size(), 1U);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
        // strict in exact arithmetic; measured sums carry rounding
        EXPECT_LE(r.objective_trace[i], r.objective_trace[i - 1] * (1.0 + 1e-13));
    }
    EXPECT_NEAR(r.objective_trace.back(), r.residual, 1e-9 * r.residual);
}

TEST(retrieve_phases, gauge_invariance) {
    const TransferMatrix t = columns(haar_random(8, 9), 4);
    CMatrix d_out = CMatrix::Zero(8, 8);
    CMatrix d_in = CMatrix::Zero(4, 4);
    for (int k = 0; k < 8; ++k) {
        d_out(k, k) = std::polar(1.0, 0.9 * k);
    }
    for (int j = 0; j < 4; ++j) {
        d_in(j, j) = std::polar(1.0, -0.4 * j - 1.0);
    }
    const TransferMatrix rotated{d_out * t.entries * d_in, ""};
    const auto a = synth_visibility_set(t, {0, 1, 2, 3}, 1.0, 0.0, 0).records;
    const auto b = synth_visibility_set(rotated, {0, 1, 2, 3}, 1.0, 0.0, 0).records;
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(a[i].visibility, b[i].visibility, 1e-12);
    }
    const CharacterizationResult ra = retrieve_phases(moduli(t), a);
    const CharacterizationResult rb = retrieve_phases(moduli(rotated), b);
    EXPECT_LT(max_abs(ra.matrix.entries - rb.matrix.entries), 1e-6);
}

TEST(retrieve_phases, conjugate_has_same_data_and_result) {
    const TransferMatrix t = columns(haar_random(7, 10), 4);
    const TransferMatrix c{t.entries.conjugate(), ""};
    const auto a = synth_visibility_set(t, {0, 1, 2, 3}, 1.0, 0.0, 0).records;
    const auto b = synth_visibility_set(c, {0, 1, 2, 3}, 1.0, 0.0, 0).records;
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(a[i].visibility, b[i].visibility, 1e-12);
    }
    const CharacterizationResult r = retrieve_phases(moduli(t), a);
    EXPECT_LT(max_abs(r.matrix.entries - truth_of(t).entries), 1e-6);
    EXPECT_LT(max_abs(r.matrix.entries - truth_of(c).entries), 1e-6);
    // canonical representative: first free phase outside {0, π} in (0, π)
    bool decided = false;
    for (Eigen::Index k = 1; k < 7 && !decided; ++k) {
        for (Eigen::Index j = 1; j < 4 && !decided; ++j) {
            const double s = std::sin(std::arg(r.matrix.entries(k, j)));
            if (std::abs(s) > 1e-6) {
                EXPECT_GT(s, 0.0);
                decided = true;
            }
        }
    }
}

TEST(retrieve_phases, deterministic_across_worker_counts) {
    const TransferMatrix t = columns(haar_random(8, 11), 4);
    const auto rec = synth_visibility_set(t, {0, 1, 2, 3}, 1.0, 0.01, 3).records;
    const CharacterizationResult a = retrieve_phases(moduli(t), rec, {.seed = 5, .workers = 1});
    const CharacterizationResult b = retrieve_phases(moduli(t), rec, {.seed = 5, .workers = 6});
    EXPECT_EQ(a.matrix.entries, b.matrix.entries);
    EXPECT_EQ(a.best_restart, b.best_restart);
}

TEST(retrieve_phases, assumed_overlap_mismatch_scales_visibilities) {
    const TransferMatrix t = columns(haar_random(8, 12), 4);
    const auto rec = synth_visibility_set(t, {0, 1, 2, 3}, 0.95, 0.0, 0).records;
    const CharacterizationResult wrong = retrieve_phases(moduli(t), rec);
    const CharacterizationResult right = retrieve_phases(moduli(t), rec, {.x_assumed = 0.95});
    EXPECT_LT(right.residual, 1e-10);
    EXPECT_GT(wrong.residual, right.residual);
    EXPECT_LT(max_abs(right.matrix.entries - truth_of(t).entries), 1e-6);
}

TEST(retrieve_phases, under_determined) {
    const TransferMatrix t = columns(haar_random(6, 13), 4);
    auto rec = synth_visibility_set(t, {0, 1, 2, 3}, 1.0, 0.0, 0).records;
    rec.resize(10);
    EXPECT_THROW(retrieve_phases(moduli(t), rec), UnderDetermined);
}

TEST(retrieve_phases, bad_records_rejected) {
    const TransferMatrix t = columns(haar_random(5, 14), 3);
    auto rec = synth_visibility_set(t, {0, 1, 2}, 1.0, 0.0, 0).records;
    rec[0].sigma = 0.0;
    EXPECT_THROW(retrieve_phases(moduli(t), rec), InvalidArgument);
    rec[0].sigma = 1.0;
    rec[0].input_b = 3;
    EXPECT_THROW(retrieve_phases(moduli(t), rec), InvalidArgument);
}
