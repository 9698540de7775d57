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

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "photonsim/parallel.hpp"

namespace photonsim {

namespace {

constexpr double kGradientTol = 1e-8;
constexpr double kCanonicalSinTol = 1e-6;
constexpr double kSnapWindow = 1e-2;

void check_indices(int rows, int cols, const VisibilityRecord &r) {
    if (r.input_a == r.input_b || r.output_a == r.output_b) {
        throw InvalidArgument("visibility record needs two distinct inputs and two distinct outputs");
    }
    if (std::min({r.input_a, r.input_b, r.output_a, r.output_b}) < 0 || std::max(r.input_a, r.input_b) >= cols ||
        std::max(r.output_a, r.output_b) >= rows) {
        throw InvalidArgument("visibility record index outside the transfer matrix");
    }
}

// Phases θ_{k,j} for k, j ≥ 1; the first row and column are zero.
class PhaseModel {
public:
    PhaseModel(const RMatrix &magnitudes, const std::vector<VisibilityRecord> &records, double x)
        : mag_(magnitudes), records_(records), x2_(x * x), cols_(static_cast<int>(magnitudes.cols())) {}

    int parameters() const { return static_cast<int>((mag_.rows() - 1) * (mag_.cols() - 1)); }

    int index(int k, int j) const { return k == 0 || j == 0 ? -1 : (k - 1) * (cols_ - 1) + (j - 1); }

    double phase(const Eigen::VectorXd &theta, int k, int j) const {
        const int p = index(k, j);
        return p < 0 ? 0.0 : theta(p);
    }

    // residuals and Jacobian (rows = records, cols = parameters)
    void evaluate(const Eigen::VectorXd &theta, Eigen::VectorXd &res, Eigen::MatrixXd *jac) const {
        const auto m = static_cast<Eigen::Index>(records_.size());
        res.resize(m);
        if (jac != nullptr) {
            jac->setZero(m, parameters());
        }
        for (Eigen::Index r = 0; r < m; ++r) {
            const VisibilityRecord &rec = records_[static_cast<std::size_t>(r)];
            const int i = rec.input_a;
            const int j = rec.input_b;
            const int k = rec.output_a;
            const int l = rec.output_b;
            const double direct = mag_(k, i) * mag_(l, j);
            const double crossed = mag_(l, i) * mag_(k, j);
            const double c = direct * direct + crossed * crossed;
            const double inv_sigma = 1.0 / rec.sigma;
            if (c == 0.0) {
                res(r) = 0.0;
                continue;
            }
            const double phi =
                phase(theta, k, i) + phase(theta, l, j) - phase(theta, l, i) - phase(theta, k, j);
            const double amp = 2.0 * x2_ * direct * crossed / c;
            res(r) = (-amp * std::cos(phi) - rec.visibility) * inv_sigma;
            if (jac != nullptr) {
                const double d = amp * std::sin(phi) * inv_sigma;
                const auto add = [&](int kk, int jj, double sign) {
                    const int p = index(kk, jj);
                    if (p >= 0) {
                        (*jac)(r, p) += sign * d;
                    }
                };
                add(k, i, 1.0);
                add(l, j, 1.0);
                add(l, i, -1.0);
                add(k, j, -1.0);
            }
        }
    }

    // Σ r'² - Σ r² for θ' = θ + step. Residual differences use
    // cos φ' - cos φ = -2 sin((φ' + φ)/2) sin((φ' - φ)/2), so the change is
    // resolved even when it is far below the rounding of Σ r².
    double objective_change(const Eigen::VectorXd &theta, const Eigen::VectorXd &step,
                            const Eigen::VectorXd &res) const {
        double change = 0.0;
        for (std::size_t r = 0; r < records_.size(); ++r) {
            const VisibilityRecord &rec = records_[r];
            const int i = rec.input_a;
            const int j = rec.input_b;
            const int k = rec.output_a;
            const int l = rec.output_b;
            const double direct = mag_(k, i) * mag_(l, j);
            const double crossed = mag_(l, i) * mag_(k, j);
            const double c = direct * direct + crossed * crossed;
            if (c == 0.0) {
                continue;
            }
            const double phi = phase(theta, k, i) + phase(theta, l, j) - phase(theta, l, i) - phase(theta, k, j);
            const double dphi = phase(step, k, i) + phase(step, l, j) - phase(step, l, i) - phase(step, k, j);
            const double amp = 2.0 * x2_ * direct * crossed / c;
            const double dres = 2.0 * amp * std::sin(phi + 0.5 * dphi) * std::sin(0.5 * dphi) / rec.sigma;
            change += dres * (2.0 * res(static_cast<Eigen::Index>(r)) + dres);
        }
        return change;
    }

private:
    const RMatrix &mag_;
    const std::vector<VisibilityRecord> &records_;
    double x2_;
    int cols_;
};

struct LocalFit {
    Eigen::VectorXd theta;
    double objective = 0.0;
    double gradient_norm = 0.0;
    std::vector<double> trace;
};

// Levenberg–Marquardt; only steps that lower the objective are accepted.
LocalFit levenberg_marquardt(const PhaseModel &model, Eigen::VectorXd theta, int max_iterations, bool trace) {
    Eigen::VectorXd res;
    Eigen::MatrixXd jac;
    model.evaluate(theta, res, &jac);
    double obj = res.squaredNorm();
    std::vector<double> history;
    if (trace) {
        history.push_back(obj);
    }
    Eigen::VectorXd grad = 2.0 * jac.transpose() * res;
    double lambda = 1e-3;
    for (int it = 0; it < max_iterations && grad.norm() >= kGradientTol; ++it) {
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * res;
        bool accepted = false;
        while (!accepted && lambda < 1e16) {
            Eigen::MatrixXd lhs = jtj;
            for (Eigen::Index p = 0; p < lhs.rows(); ++p) {
                lhs(p, p) += lambda * std::max(jtj(p, p), 1e-12);
            }
            const Eigen::VectorXd step = lhs.ldlt().solve(-jtr);
            if (model.objective_change(theta, step, res) < 0.0) {
                theta += step;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
            } else {
                lambda *= 4.0;
            }
        }
        if (!accepted) {
            break;
        }
        model.evaluate(theta, res, &jac);
        obj = res.squaredNorm();
        grad = 2.0 * jac.transpose() * res;
        if (trace) {
            history.push_back(obj);
        }
    }
    // Where the fit meets a phase of 0 or π the objective is flat to high
    // order, so gradient steps stall short of it; snapping is accepted only
    // if it does not raise the objective.
    bool snapped = false;
    for (Eigen::Index p = 0; p < theta.size(); ++p) {
        const double target = kPi * std::round(theta(p) / kPi);
        if (std::abs(theta(p) - target) > kSnapWindow || theta(p) == target) {
            continue;
        }
        Eigen::VectorXd step = Eigen::VectorXd::Zero(theta.size());
        step(p) = target - theta(p);
        if (model.objective_change(theta, step, res) <= 0.0) {
            theta(p) = target;
            model.evaluate(theta, res, &jac);
            snapped = true;
        }
    }
    if (snapped) {
        obj = res.squaredNorm();
        grad = 2.0 * jac.transpose() * res;
        if (trace) {
            history.push_back(obj);
        }
    }
    return {std::move(theta), obj, grad.norm(), std::move(history)};
}

double wrap_symmetric(double phi) {
    double w = wrap_phase(phi);
    return w > kPi ? w - kTwoPi : w;
}

}  // namespace

RMatrix magnitudes_from_counts(const CountTable &table) {
    const RMatrix &c = table.counts;
    if (c.size() == 0) {
        throw InvalidArgument("empty count table");
    }
    if ((c.array() < 0.0).any() || !c.allFinite()) {
        throw InvalidArgument("counts must be finite and non-negative");
    }
    RMatrix mag(c.cols(), c.rows());
    for (Eigen::Index j = 0; j < c.rows(); ++j) {
        const double total = c.row(j).sum();
        if (!(total > 0.0)) {
            throw InvalidArgument("input " + std::to_string(j + 1) + " has no counts");
        }
        for (Eigen::Index k = 0; k < c.cols(); ++k) {
            mag(k, j) = std::sqrt(c(j, k) / total);
        }
    }
    return mag;
}

double hom_visibility(const TransferMatrix &t, int input_a, int input_b, int output_a, int output_b, double x) {
    check_indices(static_cast<int>(t.out_modes()), static_cast<int>(t.in_modes()),
                  {input_a, input_b, output_a, output_b, 0.0, 1.0});
    const CMatrix &m = t.entries;
    const Complex direct = m(output_a, input_a) * m(output_b, input_b);
    const Complex crossed = m(output_b, input_a) * m(output_a, input_b);
    const double c = std::norm(direct) + std::norm(crossed);
    if (c == 0.0) {
        throw UndefinedVisibility("no coincidences between outputs " + std::to_string(output_a + 1) + " and " +
                                  std::to_string(output_b + 1));
    }
    const double q = c + 2.0 * x * x * (direct * std::conj(crossed)).real();
    return (c - q) / c;
}

VisibilitySet synth_visibility_set(const TransferMatrix &t, const std::vector<int> &inputs, double x, double sigma,
                                   std::uint64_t seed) {
    if (inputs.size() < 2) {
        throw InvalidArgument("need at least two inputs");
    }
    if (sigma < 0.0) {
        throw InvalidArgument("noise sigma must be non-negative");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    VisibilitySet out;
    const int outputs = static_cast<int>(t.out_modes());
    for (std::size_t a = 0; a < inputs.size(); ++a) {
        for (std::size_t b = a + 1; b < inputs.size(); ++b) {
            for (int k = 0; k < outputs; ++k) {
                for (int l = k + 1; l < outputs; ++l) {
                    VisibilityRecord rec{inputs[a], inputs[b], k, l, 0.0, sigma > 0.0 ? sigma : 1.0};
                    try {
                        rec.visibility = hom_visibility(t, inputs[a], inputs[b], k, l, x);
                    } catch (const UndefinedVisibility &) {
                        ++out.omitted;
                        continue;
                    }
                    if (sigma > 0.0) {
                        rec.visibility = std::clamp(rec.visibility + sigma * noise(rng), -kMaxAntiDip, 1.0);
                    }
                    out.records.push_back(rec);
                }
            }
        }
    }
    return out;
}

double visibility_objective(const TransferMatrix &t, const std::vector<VisibilityRecord> &records, double x) {
    double total = 0.0;
    for (const VisibilityRecord &r : records) {
        const double v = hom_visibility(t, r.input_a, r.input_b, r.output_a, r.output_b, x);
        total += (v - r.visibility) * (v - r.visibility) / (r.sigma * r.sigma);
    }
    return total;
}

TransferMatrix canonical_conjugation(const TransferMatrix &gauge_fixed) {
    const CMatrix &m = gauge_fixed.entries;
    for (Eigen::Index k = 1; k < m.rows(); ++k) {
        for (Eigen::Index j = 1; j < m.cols(); ++j) {
            if (std::abs(m(k, j)) == 0.0) {
                continue;
            }
            const double s = std::sin(std::arg(m(k, j)));
            if (std::abs(s) > kCanonicalSinTol) {
                return s > 0 ? gauge_fixed : TransferMatrix{m.conjugate(), gauge_fixed.label};
            }
        }
    }
    return gauge_fixed;
}

CharacterizationResult retrieve_phases(const RMatrix &magnitudes, const std::vector<VisibilityRecord> &records,
                                       const RetrievalOptions &options) {
    if (magnitudes.rows() < 2 || magnitudes.cols() < 2) {
        throw InvalidArgument("need at least two inputs and two outputs");
    }
    if ((magnitudes.array() < 0.0).any()) {
        throw InvalidArgument("magnitudes must be non-negative");
    }
    if (options.restarts < 1) {
        throw InvalidArgument("need at least one restart");
    }
    for (const VisibilityRecord &r : records) {
        check_indices(static_cast<int>(magnitudes.rows()), static_cast<int>(magnitudes.cols()), r);
        if (!(r.sigma > 0.0)) {
            throw InvalidArgument("visibility sigma must be positive");
        }
    }
    const PhaseModel model(magnitudes, records, options.x_assumed);
    const int params = model.parameters();
    if (static_cast<int>(records.size()) < params) {
        throw UnderDetermined(std::to_string(records.size()) + " visibilities cannot constrain " +
                              std::to_string(params) + " phases");
    }

    std::vector<LocalFit> fits(static_cast<std::size_t>(options.restarts));
    const unsigned workers =
        options.workers == 0 ? std::max(1U, std::thread::hardware_concurrency()) : options.workers;
    parallel_for(fits.size(), workers, [&](std::size_t r) {
        std::seed_seq seq{static_cast<std::uint64_t>(options.seed), static_cast<std::uint64_t>(r)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> start(-kPi, kPi);
        Eigen::VectorXd theta(params);
        for (int p = 0; p < params; ++p) {
            theta(p) = start(rng);
        }
        fits[r] = levenberg_marquardt(model, std::move(theta), options.max_iterations, options.record_trace);
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < fits.size(); ++r) {
        if (fits[r].objective < fits[best].objective) {
            best = r;
        }
    }

    CMatrix m(magnitudes.rows(), magnitudes.cols());
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double phi = wrap_symmetric(model.phase(fits[best].theta, static_cast<int>(k), static_cast<int>(j)));
            m(k, j) = std::polar(magnitudes(k, j), phi);
        }
    }
    CharacterizationResult result;
    result.matrix = canonical_conjugation(fix_gauge({std::move(m), "retrieved"}).matrix);
    result.residual = fits[best].objective;
    result.n_restarts_used = options.restarts;
    result.gradient_norm = fits[best].gradient_norm;
    result.converged = fits[best].gradient_norm < kGradientTol;
    result.best_restart = static_cast<int>(best);
    result.objective_trace = std::move(fits[best].trace);
    return result;
}

}  // namespace photonsim
