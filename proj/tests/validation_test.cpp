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

#include "photonsim/validation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace photonsim;

namespace {

OutcomeDistribution model_distribution(const TransferMatrix &t, const OccupationPattern &in,
                                       const InterferenceModel &model) {
    return output_distribution(t, in, model, {.normalization = Normalization::renormalized});
}

std::vector<double> random_simplex(std::mt19937_64 &rng, std::size_t n) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> p(n);
    for (double &v : p) {
        v = e(rng);
    }
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (double &v : p) {
        v /= s;
    }
    return p;
}

// least-squares slope of y against 1..n
double slope(const std::vector<double> &y) {
    const double n = static_cast<double>(y.size());
    const double tbar = (n + 1.0) / 2.0;
    const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double dt = static_cast<double>(i + 1) - tbar;
        num += dt * (y[i] - ybar);
        den += dt * dt;
    }
    return num / den;
}

OverlapMatrix distinguishable(int n) { return uniform_overlap(n, 0.0); }

}  // namespace

TEST(fidelity, examples) {
    const std::vector<double> p{1.0, 0.0};
    const std::vector<double> q{0.5, 0.5};
    const std::vector<double> r{0.0, 1.0};
    EXPECT_DOUBLE_EQ(fidelity(q, q), 1.0);
    EXPECT_EQ(fidelity(p, r), 0.0);
    EXPECT_NEAR(fidelity(p, q), 0.5, 1e-15);
    EXPECT_THROW(fidelity(p, std::vector<double>{1.0}), InvalidArgument);
}

TEST(tvd, examples) {
    const std::vector<double> p{1.0, 0.0};
    const std::vector<double> q{0.5, 0.5};
    const std::vector<double> r{0.0, 1.0};
    EXPECT_EQ(tvd(q, q), 0.0);
    EXPECT_EQ(tvd(p, r), 1.0);
    EXPECT_EQ(tvd(p, q), 0.5);
    EXPECT_THROW(tvd(p, std::vector<double>{1.0, 0.0, 0.0}), InvalidArgument);
}

TEST(tvd, metric_properties_on_random_triples) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 30;
        const auto p = random_simplex(rng, n);
        const auto q = random_simplex(rng, n);
        const auto r = random_simplex(rng, n);
        EXPECT_EQ(tvd(p, q), tvd(q, p));
        EXPECT_LE(tvd(p, r), tvd(p, q) + tvd(q, r) + 1e-15);
        EXPECT_GE(tvd(p, q), 0.0);
        EXPECT_LE(tvd(p, q), 1.0);
        EXPECT_GE(fidelity(p, q), 0.0);
        EXPECT_LE(fidelity(p, q), 1.0 + 1e-15);
        EXPECT_NEAR(fidelity(p, p), 1.0, 1e-14);
        EXPECT_EQ(tvd(p, p), 0.0);
    }
}

TEST(sample_set, rejects_bad_samples) {
    EXPECT_THROW(SampleSet(4, 2, {OccupationPattern::from_modes({0, 0})}), InvalidArgument);
    EXPECT_THROW(SampleSet(4, 2, {OccupationPattern::from_modes({0, 4})}), InvalidArgument);
    EXPECT_THROW(SampleSet(4, 2, {OccupationPattern::from_modes({0, 1, 2})}), InvalidArgument);
    const SampleSet s(4, 2, {OccupationPattern::from_modes({0, 1}), OccupationPattern::from_modes({2, 3}),
                             OccupationPattern::from_modes({0, 1})});
    const std::vector<double> c = s.counts();
    ASSERT_EQ(c.size(), 6U);
    EXPECT_EQ(c.front(), 2.0);
    EXPECT_EQ(c.back(), 1.0);
}

TEST(draw_samples, point_mass) {
    OutcomeDistribution d;
    d.modes = 5;
    d.photons = 2;
    d.patterns = collision_free_patterns(5, 2);
    d.probs.assign(d.patterns.size(), 0.0);
    d.probs[7] = 1.0;
    d.normalization = Normalization::renormalized;
    for (const OccupationPattern &s : draw_samples(d, 100, 3).samples) {
        EXPECT_EQ(s, d.patterns[7]);
    }
}

TEST(draw_samples, frequencies_concentrate) {
    OutcomeDistribution d;
    d.modes = 5;
    d.photons = 2;
    d.patterns = collision_free_patterns(5, 2);
    std::mt19937_64 rng(2);
    d.probs = random_simplex(rng, d.patterns.size());
    d.normalization = Normalization::renormalized;
    const std::size_t n = 100000;
    const std::vector<double> counts = draw_samples(d, n, 9).counts();
    for (std::size_t j = 0; j < counts.size(); ++j) {
        const double p = d.probs[j];
        EXPECT_NEAR(counts[j] / static_cast<double>(n), p, 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n)));
    }
}

TEST(draw_samples, deterministic_and_validated) {
    const TransferMatrix t = haar_random(6, 4);
    const auto d = model_distribution(t, OccupationPattern::from_modes({0, 1, 2}), Ideal{});
    EXPECT_EQ(draw_samples(d, 500, 11).samples, draw_samples(d, 500, 11).samples);
    EXPECT_NE(draw_samples(d, 500, 11).samples, draw_samples(d, 500, 12).samples);
    const auto physical = output_distribution(t, OccupationPattern::from_modes({0, 1, 2}), Ideal{});
    EXPECT_THROW(draw_samples(physical, 10, 0), InvalidArgument);
}

TEST(poisson_bootstrap_distance, proportional_counts) {
    const TransferMatrix t = haar_random(13, 5);
    const auto d = model_distribution(t, OccupationPattern::from_modes({0, 1, 2}), Ideal{});
    ASSERT_EQ(d.probs.size(), 286U);
    std::vector<double> counts(d.probs.size());
    std::transform(d.probs.begin(), d.probs.end(), counts.begin(), [](double p) { return 1e5 * p; });
    const BootstrapDistance b = poisson_bootstrap_distance(counts, d.probs, 100, 7);
    EXPECT_LT(b.mean, 0.05);
    EXPECT_GT(b.std, 0.0);
    std::transform(d.probs.begin(), d.probs.end(), counts.begin(), [](double p) { return 1e9 * p; });
    EXPECT_LT(poisson_bootstrap_distance(counts, d.probs, 20, 7).mean, 1e-3);
}

TEST(poisson_bootstrap_distance, bias_is_nonnegative_on_average) {
    const TransferMatrix t = haar_random(8, 6);
    const auto d = model_distribution(t, OccupationPattern::from_modes({0, 1, 2}), Ideal{});
    double raw = 0.0;
    double boot = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::vector<double> counts = draw_samples(d, 5000, 100 + rep).counts();
        raw += tvd(normalized(counts), d.probs);
        boot += poisson_bootstrap_distance(counts, d.probs, 20, rep).mean;
    }
    EXPECT_GE(boot, raw);
}

TEST(poisson_bootstrap_distance, reproducible_and_worker_independent) {
    const std::vector<double> counts{10, 0, 30, 5, 55};
    const std::vector<double> model{0.1, 0.05, 0.3, 0.05, 0.5};
    const BootstrapDistance a = poisson_bootstrap_distance(counts, model, 2, 42, 1);
    const BootstrapDistance b = poisson_bootstrap_distance(counts, model, 2, 42, 4);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std, b.std);
    EXPECT_THROW(poisson_bootstrap_distance(std::vector<double>(5, 0.0), model, 2, 0), InvalidArgument);
    EXPECT_THROW(poisson_bootstrap_distance(counts, model, 1, 0), InvalidArgument);
}

TEST(fit_overlap, recovers_uniform_overlap) {
    const TransferMatrix t = haar_random(8, 7);
    const InputMixture in = InputMixture::pure(OccupationPattern::from_modes({0, 1, 2}));
    const SeriesTable table(t, in);
    const auto truth = table.evaluate(0.9, 3, Normalization::renormalized);
    const OverlapFit fit = fit_overlap(draw_samples(truth, 1000000, 8).counts(), table, 3);
    EXPECT_NEAR(fit.x, 0.9, 0.02);
    EXPECT_LT(fit.distance, 0.01);
}

TEST(fit_overlap, boundary_recovery) {
    const TransferMatrix t = haar_random(8, 9);
    const OccupationPattern input = OccupationPattern::from_modes({0, 1, 2});
    const SeriesTable table(t, InputMixture::pure(input));
    const auto ideal = model_distribution(t, input, Ideal{});
    const auto dist = model_distribution(t, input, Overlap{distinguishable(3)});
    EXPECT_GT(fit_overlap(draw_samples(ideal, 100000, 1).counts(), table, 3).x, 0.98);
    EXPECT_LT(fit_overlap(draw_samples(dist, 100000, 2).counts(), table, 3).x, 0.1);
}

TEST(fit_overlap, exact_distribution_gives_exact_fit) {
    const TransferMatrix t = haar_random(7, 10);
    const SeriesTable table(t, InputMixture::pure(OccupationPattern::from_modes({1, 3, 4})));
    const auto truth = table.evaluate(0.55, 3, Normalization::renormalized);
    const OverlapFit fit = fit_overlap(truth.probs, table, 3);
    EXPECT_NEAR(fit.x, 0.55, 1e-4);
    EXPECT_LT(fit.distance, 1e-3);
}

TEST(likelihood_ratio_curve, identical_models_give_ones) {
    const TransferMatrix t = haar_random(6, 11);
    const auto d = model_distribution(t, OccupationPattern::from_modes({0, 1, 2}), Ideal{});
    const LikelihoodCurve c = likelihood_ratio_curve(draw_samples(d, 50, 1), d.probs, d.probs);
    ASSERT_EQ(c.values.size(), 50U);
    for (double v : c.values) {
        EXPECT_EQ(v, 1.0);
    }
    EXPECT_FALSE(c.divergent);
}

TEST(likelihood_ratio_curve, zero_is_sticky) {
    std::vector<double> b(6, 1.0 / 6.0);
    std::vector<double> a{0.0, 0.2, 0.2, 0.2, 0.2, 0.2};
    const auto patterns = collision_free_patterns(4, 2);
    const SampleSet s(4, 2, {patterns[1], patterns[0], patterns[2], patterns[3]});
    const LikelihoodCurve c = likelihood_ratio_curve(s, a, b);
    EXPECT_NEAR(c.values[0], 1.2, 1e-14);
    for (std::size_t i = 1; i < c.values.size(); ++i) {
        EXPECT_EQ(c.values[i], 0.0);
    }
}

TEST(likelihood_ratio_curve, unsupported_by_b_diverges) {
    const std::vector<double> a(6, 1.0 / 6.0);
    const std::vector<double> b{0.0, 0.2, 0.2, 0.2, 0.2, 0.2};
    const auto patterns = collision_free_patterns(4, 2);
    const LikelihoodCurve c = likelihood_ratio_curve(SampleSet(4, 2, {patterns[1], patterns[0], patterns[2]}), a, b);
    EXPECT_TRUE(c.divergent);
    EXPECT_LT(c.values[0], 1.0);
    EXPECT_TRUE(std::isinf(c.values[1]));
    EXPECT_TRUE(std::isinf(c.values[2]));
}

TEST(likelihood_ratio_curve, errors) {
    const std::vector<double> a{0.0, 0.5, 0.5, 0.0, 0.0, 0.0};
    const auto patterns = collision_free_patterns(4, 2);
    EXPECT_THROW(likelihood_ratio_curve(SampleSet(4, 2, {patterns[5]}), a, a), InvalidArgument);
    EXPECT_THROW(likelihood_ratio_curve(SampleSet(4, 2, {patterns[1]}), a, std::vector<double>(3, 1.0 / 3)),
                 InvalidArgument);
}

TEST(likelihood_ratio_curve, decays_for_wrong_model) {
    const TransferMatrix t = haar_random(8, 12);
    const OccupationPattern input = OccupationPattern::from_modes({0, 1, 2});
    const auto b = model_distribution(t, input, Ideal{});
    const auto a = model_distribution(t, input, Overlap{distinguishable(3)});
    int negative = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const LikelihoodCurve c = likelihood_ratio_curve(draw_samples(b, 30, 1000 + rep), a.probs, b.probs);
        std::vector<double> logs(c.values.size());
        std::transform(c.values.begin(), c.values.end(), logs.begin(), [](double v) { return std::log(v); });
        negative += slope(logs) < 0.0;
    }
    EXPECT_GE(negative, 95);
}

TEST(likelihood_ratio_curve, terminal_value_is_order_invariant) {
    const TransferMatrix t = haar_random(7, 13);
    const OccupationPattern input = OccupationPattern::from_modes({0, 2, 4});
    const auto b = model_distribution(t, input, Ideal{});
    const auto a = model_distribution(t, input, TruncatedUniform{1.0, 2});
    SampleSet s = draw_samples(b, 200, 3);
    const double terminal = likelihood_ratio_curve(s, a.probs, b.probs).values.back();
    std::mt19937_64 rng(4);
    for (int k = 0; k < 10; ++k) {
        std::shuffle(s.samples.begin(), s.samples.end(), rng);
        EXPECT_EQ(likelihood_ratio_curve(s, a.probs, b.probs).values.back(), terminal);
    }
}

TEST(model_ranking, fitted_full_model_wins) {
    const TransferMatrix t = haar_random(13, 14);
    const OccupationPattern input = OccupationPattern::from_modes({0, 1, 2});
    const SeriesTable table(t, InputMixture::pure(input));
    const auto truth = table.evaluate(0.9, 3, Normalization::renormalized);
    const std::vector<double> counts = draw_samples(truth, 100000, 15).counts();
    const std::vector<double> data = normalized(counts);
    const double full = fit_overlap(counts, table, 3).distance;
    const double truncated = fit_overlap(counts, table, 2).distance;
    EXPECT_LT(full, truncated);
    for (int marked = 1; marked <= 3; ++marked) {
        const auto m = model_distribution(t, input, Overlap{marked_photon_overlap(3, marked)});
        EXPECT_LT(truncated, tvd(data, m.probs)) << "marked " << marked;
    }
    EXPECT_LT(truncated, tvd(data, model_distribution(t, input, Overlap{distinguishable(3)}).probs));
}
