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

#include "photonsim/photon_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace photonsim {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kPsdTol = 1e-10;
constexpr double kTailMassLimit = 1e-6;

}  // namespace

OverlapMatrix OverlapMatrix::from_matrix(CMatrix x) {
    if (x.rows() != x.cols() || x.rows() == 0) {
        throw InvalidArgument("overlap matrix must be square and non-empty");
    }
    if (!x.allFinite()) {
        throw InvalidArgument("overlap matrix has non-finite entries");
    }
    const Eigen::Index n = x.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(x(j, j) - Complex(1.0, 0.0)) > kHermitianTol) {
            throw InvalidArgument("overlap matrix diagonal must be 1");
        }
        x(j, j) = 1.0;
        for (Eigen::Index k = j + 1; k < n; ++k) {
            if (std::abs(x(j, k) - std::conj(x(k, j))) > kHermitianTol) {
                throw InvalidArgument("overlap matrix is not Hermitian");
            }
            if (std::abs(x(j, k)) > 1.0 + kHermitianTol) {
                throw InvalidArgument("overlap entry with modulus above 1");
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(x, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kPsdTol) {
        throw InvalidArgument("overlap matrix is not positive semidefinite (min eigenvalue " +
                              std::to_string(eig.eigenvalues().minCoeff()) + ")");
    }
    return OverlapMatrix(std::move(x));
}

OverlapMatrix uniform_overlap(int photons, Complex x) {
    if (photons < 1) {
        throw InvalidArgument("uniform_overlap needs at least one photon");
    }
    if (std::abs(x) > 1.0) {
        throw InvalidArgument("uniform overlap must satisfy |x| <= 1");
    }
    CMatrix m(photons, photons);
    for (int j = 0; j < photons; ++j) {
        for (int k = 0; k < photons; ++k) {
            m(j, k) = j == k ? Complex(1.0, 0.0) : (j < k ? x : std::conj(x));
        }
    }
    return OverlapMatrix::from_matrix(std::move(m));
}

OverlapMatrix marked_photon_overlap(int photons, int marked) {
    if (marked < 1 || marked > photons) {
        throw InvalidArgument("marked photon " + std::to_string(marked) + " out of range 1.." +
                              std::to_string(photons));
    }
    const int m0 = marked - 1;
    CMatrix m = CMatrix::Ones(photons, photons);
    for (int j = 0; j < photons; ++j) {
        if (j != m0) {
            m(j, m0) = 0.0;
            m(m0, j) = 0.0;
        }
    }
    return OverlapMatrix::from_matrix(std::move(m));
}

FrequencyGrid::FrequencyGrid(std::vector<double> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.empty() || points_.size() != weights_.size()) {
        throw InvalidArgument("frequency grid needs matching, non-empty points and weights");
    }
    for (std::size_t k = 0; k < points_.size(); ++k) {
        if (!(weights_[k] > 0.0)) {
            throw InvalidArgument("frequency grid weights must be positive");
        }
        if (k > 0 && !(points_[k] > points_[k - 1])) {
            throw InvalidArgument("frequency grid points must be strictly increasing");
        }
    }
}

FrequencyGrid FrequencyGrid::uniform(double lo, double hi, int n) {
    if (n < 2 || !(hi > lo)) {
        throw InvalidArgument("uniform grid needs n >= 2 and hi > lo");
    }
    const double h = (hi - lo) / (n - 1);
    std::vector<double> pts(static_cast<std::size_t>(n));
    std::vector<double> w(static_cast<std::size_t>(n), h);
    for (int k = 0; k < n; ++k) {
        pts[static_cast<std::size_t>(k)] = lo + h * k;
    }
    w.front() = w.back() = h / 2;
    return FrequencyGrid(std::move(pts), std::move(w));
}

FrequencyGrid FrequencyGrid::covering(const std::vector<GaussianSpectrum> &spectra, int n, double half_span) {
    if (spectra.empty()) {
        throw InvalidArgument("need at least one spectrum");
    }
    double lo = spectra.front().center;
    double hi = lo;
    double width = 0.0;
    for (const GaussianSpectrum &s : spectra) {
        lo = std::min(lo, s.center);
        hi = std::max(hi, s.center);
        width = std::max(width, s.width);
    }
    return uniform(lo - half_span * width, hi + half_span * width, n);
}

std::vector<Complex> sample_spectrum(const GaussianSpectrum &s, const FrequencyGrid &grid) {
    if (!(s.width > 0.0)) {
        throw InvalidArgument("spectrum width must be positive");
    }
    // |f|² is a normal density with standard deviation width/√2
    const double lo = grid.points().front();
    const double hi = grid.points().back();
    const double tail = 0.5 * std::erfc((s.center - lo) / s.width) + 0.5 * std::erfc((hi - s.center) / s.width);
    if (tail > kTailMassLimit) {
        throw PrecisionError("frequency grid [" + std::to_string(lo) + ", " + std::to_string(hi) +
                             "] misses " + std::to_string(tail) + " of a spectrum's power");
    }
    const double norm = std::pow(kPi * s.width * s.width, -0.25);
    std::vector<Complex> f(grid.size());
    double power = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double d = grid.points()[k] - s.center;
        f[k] = norm * std::exp(-d * d / (2 * s.width * s.width)) * std::polar(1.0, s.chirp * d * d);
        power += grid.weights()[k] * std::norm(f[k]);
    }
    const double scale = 1.0 / std::sqrt(power);
    for (Complex &v : f) {
        v *= scale;
    }
    return f;
}

OverlapMatrix overlap_from_spectra(const std::vector<GaussianSpectrum> &spectra, const FrequencyGrid &grid) {
    if (spectra.empty()) {
        throw InvalidArgument("need at least one spectrum");
    }
    std::vector<std::vector<Complex>> f;
    f.reserve(spectra.size());
    for (const GaussianSpectrum &s : spectra) {
        f.push_back(sample_spectrum(s, grid));
    }
    const int n = static_cast<int>(spectra.size());
    CMatrix x(n, n);
    for (int j = 0; j < n; ++j) {
        x(j, j) = 1.0;
        for (int k = j + 1; k < n; ++k) {
            Complex acc = 0;
            for (std::size_t b = 0; b < grid.size(); ++b) {
                acc += grid.weights()[b] * f[static_cast<std::size_t>(j)][b] *
                       std::conj(f[static_cast<std::size_t>(k)][b]);
            }
            x(j, k) = acc;
            x(k, j) = std::conj(acc);
        }
    }
    return OverlapMatrix::from_matrix(std::move(x));
}

WTensor::WTensor(int photons, int outputs)
    : photons_(photons), outputs_(outputs),
      data_(static_cast<std::size_t>(photons) * static_cast<std::size_t>(photons) * static_cast<std::size_t>(outputs)) {
    if (photons < 1 || outputs < 1) {
        throw InvalidArgument("W tensor needs at least one photon and one output");
    }
}

WTensor WTensor::from_overlap(const CMatrix &a, const OverlapMatrix &x) {
    if (a.cols() != x.photons()) {
        throw InvalidArgument("W tensor: one column per photon required");
    }
    WTensor w(x.photons(), static_cast<int>(a.rows()));
    for (int l = 0; l < w.outputs(); ++l) {
        for (int j = 0; j < w.photons(); ++j) {
            for (int k = 0; k < w.photons(); ++k) {
                w.at(j, k, l) = a(l, j) * std::conj(a(l, k)) * x(j, k);
            }
        }
    }
    return w;
}

WTensorCheck check_w_tensor(const WTensor &w) {
    WTensorCheck c;
    c.min_diagonal = std::numeric_limits<double>::infinity();
    for (int l = 0; l < w.outputs(); ++l) {
        for (int j = 0; j < w.photons(); ++j) {
            const Complex d = w.at(j, j, l);
            c.diagonal_imaginary = std::max(c.diagonal_imaginary, std::abs(d.imag()));
            c.min_diagonal = std::min(c.min_diagonal, d.real());
            for (int k = 0; k < w.photons(); ++k) {
                c.conjugate_asymmetry = std::max(c.conjugate_asymmetry, std::abs(w.at(j, k, l) - std::conj(w.at(k, j, l))));
                const double bound =
                    std::sqrt(std::max(0.0, w.at(j, j, l).real()) * std::max(0.0, w.at(k, k, l).real()));
                const double mag = std::abs(w.at(j, k, l));
                c.cauchy_schwarz_excess = std::max(c.cauchy_schwarz_excess, mag - bound);
                c.saturation_gap = std::max(c.saturation_gap, bound - mag);
            }
        }
    }
    return c;
}

FrequencyResolvedTransfer::FrequencyResolvedTransfer(FrequencyGrid grid, std::vector<CMatrix> blocks, bool diagonal)
    : grid_(std::move(grid)), blocks_(std::move(blocks)), diagonal_(diagonal) {
    const std::size_t expected = diagonal_ ? grid_.size() : grid_.size() * grid_.size();
    if (blocks_.size() != expected) {
        throw InvalidArgument("frequency-resolved transfer has " + std::to_string(blocks_.size()) +
                              " blocks, expected " + std::to_string(expected));
    }
    for (const CMatrix &b : blocks_) {
        if (b.rows() != blocks_.front().rows() || b.cols() != blocks_.front().cols()) {
            throw InvalidArgument("frequency-resolved transfer blocks differ in shape");
        }
    }
}

FrequencyResolvedTransfer FrequencyResolvedTransfer::diagonal(FrequencyGrid grid, std::vector<CMatrix> per_bin) {
    return FrequencyResolvedTransfer(std::move(grid), std::move(per_bin), true);
}

FrequencyResolvedTransfer FrequencyResolvedTransfer::flat(FrequencyGrid grid, const CMatrix &m) {
    std::vector<CMatrix> blocks(grid.size(), m);
    return FrequencyResolvedTransfer(std::move(grid), std::move(blocks), true);
}

FrequencyResolvedTransfer FrequencyResolvedTransfer::general(FrequencyGrid grid, std::vector<CMatrix> blocks) {
    return FrequencyResolvedTransfer(std::move(grid), std::move(blocks), false);
}

WTensor build_w_tensor(const FrequencyResolvedTransfer &transfer, const std::vector<GaussianSpectrum> &spectra,
                       const std::vector<int> &inputs) {
    if (spectra.empty() || spectra.size() != inputs.size()) {
        throw InvalidArgument("build_w_tensor needs one spectrum per input photon");
    }
    const FrequencyGrid &grid = transfer.grid();
    const std::size_t bins = grid.size();
    const int photons = static_cast<int>(spectra.size());
    const int outputs = static_cast<int>(transfer.out_modes());
    for (int in : inputs) {
        if (in < 0 || in >= transfer.in_modes()) {
            throw InvalidArgument("input mode " + std::to_string(in) + " outside the transfer matrix");
        }
    }
    std::vector<std::vector<Complex>> f;
    for (const GaussianSpectrum &s : spectra) {
        f.push_back(sample_spectrum(s, grid));
    }

    // v[Ω][j * outputs + l] = V^Ω_{j,l}
    std::vector<std::vector<Complex>> v(bins, std::vector<Complex>(static_cast<std::size_t>(photons * outputs)));
    for (std::size_t out_bin = 0; out_bin < bins; ++out_bin) {
        for (int j = 0; j < photons; ++j) {
            const int in = inputs[static_cast<std::size_t>(j)];
            for (int l = 0; l < outputs; ++l) {
                Complex amp = 0;
                if (transfer.is_diagonal()) {
                    amp = transfer.bin(out_bin)(l, in) * f[static_cast<std::size_t>(j)][out_bin];
                } else {
                    for (std::size_t in_bin = 0; in_bin < bins; ++in_bin) {
                        amp += grid.weights()[in_bin] * transfer.blocks()[in_bin * bins + out_bin](l, in) *
                               f[static_cast<std::size_t>(j)][in_bin];
                    }
                }
                v[out_bin][static_cast<std::size_t>(j * outputs + l)] = amp;
            }
        }
    }

    WTensor w(photons, outputs);
    for (int l = 0; l < outputs; ++l) {
        for (int j = 0; j < photons; ++j) {
            for (int k = j; k < photons; ++k) {
                Complex acc = 0;
                for (std::size_t b = 0; b < bins; ++b) {
                    acc += grid.weights()[b] * v[b][static_cast<std::size_t>(j * outputs + l)] *
                           std::conj(v[b][static_cast<std::size_t>(k * outputs + l)]);
                }
                if (j == k) {
                    acc = acc.real();
                }
                w.at(j, k, l) = acc;
                w.at(k, j, l) = std::conj(acc);
            }
        }
    }
    return w;
}

FrequencyMesh frequency_dependent_mesh(const MeshParams &params, const Dispersion &dispersion,
                                       const FrequencyGrid &grid) {
    validate_mesh(params);
    const int n = params.n_modes;
    if (!dispersion.transmissivity_slopes.empty() &&
        dispersion.transmissivity_slopes.size() != params.couplers.size()) {
        throw InvalidArgument("need one transmissivity slope per coupler");
    }
    for (const auto &layer : dispersion.delays) {
        if (static_cast<int>(layer.size()) != n) {
            throw InvalidArgument("each delay layer needs one entry per mode");
        }
    }

    std::vector<std::size_t> order(params.couplers.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        order[k] = k;
    }
    std::stable_sort(order.begin(), order.end(), [&params](std::size_t a, std::size_t b) {
        return params.couplers[a].layer < params.couplers[b].layer;
    });
    int layers = static_cast<int>(dispersion.delays.size());
    for (const Coupler &c : params.couplers) {
        layers = std::max(layers, c.layer + 1);
    }

    std::vector<CMatrix> blocks;
    blocks.reserve(grid.size());
    int clamped_bins = 0;
    for (double omega : grid.points()) {
        CMatrix u = CMatrix::Identity(n, n);
        bool clamped = false;
        std::size_t next = 0;
        for (int layer = 0; layer < layers; ++layer) {
            if (layer < static_cast<int>(dispersion.delays.size())) {
                for (int m = 0; m < n; ++m) {
                    const double tau = dispersion.delays[static_cast<std::size_t>(layer)][static_cast<std::size_t>(m)];
                    if (tau != 0.0) {
                        u.row(m) *= std::polar(1.0, omega * tau);
                    }
                }
            }
            for (; next < order.size() && params.couplers[order[next]].layer == layer; ++next) {
                const Coupler &c = params.couplers[order[next]];
                double t = c.transmissivity;
                if (!dispersion.transmissivity_slopes.empty()) {
                    t += dispersion.transmissivity_slopes[order[next]] * (omega - dispersion.reference_frequency);
                }
                if (t < 0.0 || t > 1.0) {
                    clamped = true;
                    t = std::clamp(t, 0.0, 1.0);
                }
                const Eigen::Matrix2cd b = coupler_block(t, c.phase);
                const Eigen::MatrixXcd rows = u.middleRows(c.offset, 2);
                u.middleRows(c.offset, 2) = b * rows;
            }
        }
        for (int m = 0; m < n; ++m) {
            u.row(m) *= std::polar(1.0, params.output_phases[static_cast<std::size_t>(m)]);
        }
        clamped_bins += clamped ? 1 : 0;
        blocks.push_back(std::move(u));
    }
    const bool warning = clamped_bins > 0.01 * static_cast<double>(grid.size());
    return {FrequencyResolvedTransfer::diagonal(grid, std::move(blocks)), clamped_bins, warning};
}

}  // namespace photonsim
