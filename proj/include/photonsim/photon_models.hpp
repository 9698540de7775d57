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

#include <string>
#include <vector>

#include "photonsim/common.hpp"
#include "photonsim/unitary_mesh.hpp"

namespace photonsim {

/// Gram matrix x_{jk} = ⟨photon k | photon j⟩ of the photons' internal
/// states, indexed by photon label. Always Hermitian, unit diagonal,
/// positive semidefinite, with |x_{jk}| ≤ 1.
class OverlapMatrix {
public:
    /// Validates and wraps `x`; throws InvalidArgument on any violated
    /// invariant. The diagonal is snapped to exactly 1 once checked.
    static OverlapMatrix from_matrix(CMatrix x);

    const CMatrix &matrix() const { return x_; }
    int photons() const { return static_cast<int>(x_.rows()); }
    Complex operator()(int j, int k) const { return x_(j, k); }

private:
    explicit OverlapMatrix(CMatrix x) : x_(std::move(x)) {}
    CMatrix x_;
};

/// Diagonal 1, every off-diagonal entry x (x_{kj} = x* below the diagonal).
OverlapMatrix uniform_overlap(int photons, Complex x);

/// Every pair overlaps perfectly except pairs involving `marked`
/// (1-based label), which are orthogonal.
OverlapMatrix marked_photon_overlap(int photons, int marked);

/// Gaussian amplitude envelope (π w²)^{-1/4} exp(-(ω-c)²/(2w²) + i chirp (ω-c)²).
struct GaussianSpectrum {
    double center = 0.0;
    double width = 1.0;
    double chirp = 0.0;
};

/// Quadrature nodes and weights for ∫dω.
class FrequencyGrid {
public:
    FrequencyGrid(std::vector<double> points, std::vector<double> weights);

    /// Trapezoid rule on `n` equally spaced points over [lo, hi].
    static FrequencyGrid uniform(double lo, double hi, int n);

    /// Default grid for a set of spectra: `n` points spanning
    /// ±`half_span` maximum widths around the range of centres.
    static FrequencyGrid covering(const std::vector<GaussianSpectrum> &spectra, int n = 257,
                                  double half_span = 6.0);

    const std::vector<double> &points() const { return points_; }
    const std::vector<double> &weights() const { return weights_; }
    std::size_t size() const { return points_.size(); }

private:
    std::vector<double> points_;
    std::vector<double> weights_;
};

/// Samples of a spectrum's amplitude on `grid`, rescaled so that the
/// quadrature norm Σ w |f|² is exactly 1. Throws PrecisionError when more
/// than 1e-6 of the spectral power lies outside the grid.
std::vector<Complex> sample_spectrum(const GaussianSpectrum &spectrum, const FrequencyGrid &grid);

/// x_{jk} = ∫ f_j(ω) f_k*(ω) dω by quadrature.
OverlapMatrix overlap_from_spectra(const std::vector<GaussianSpectrum> &spectra, const FrequencyGrid &grid);

/// W_{j,k,l}: coherence between photon j and photon k both arriving at
/// output l, after the circuit has acted on their internal states.
class WTensor {
public:
    WTensor(int photons, int outputs);

    int photons() const { return photons_; }
    int outputs() const { return outputs_; }
    Complex &at(int j, int k, int l) { return data_[index(j, k, l)]; }
    const Complex &at(int j, int k, int l) const { return data_[index(j, k, l)]; }

    /// W_{j,k,l} = A_{l,j} A*_{l,k} x_{jk}: the tensor of a
    /// frequency-independent circuit. `a` holds one column per photon.
    static WTensor from_overlap(const CMatrix &a, const OverlapMatrix &x);

private:
    std::size_t index(int j, int k, int l) const {
        return (static_cast<std::size_t>(l) * static_cast<std::size_t>(photons_) + static_cast<std::size_t>(j)) *
                   static_cast<std::size_t>(photons_) +
               static_cast<std::size_t>(k);
    }
    int photons_;
    int outputs_;
    std::vector<Complex> data_;
};

/// Worst-case deviations from the W-tensor invariants.
struct WTensorCheck {
    double conjugate_asymmetry = 0.0;  // max |W_{jkl} - W*_{kjl}|
    double diagonal_imaginary = 0.0;   // max |Im W_{jjl}|
    double min_diagonal = 0.0;         // min Re W_{jjl}
    double cauchy_schwarz_excess = 0.0;  // max |W_{jkl}| - √(W_{jjl} W_{kkl})
    double saturation_gap = 0.0;         // max √(W_{jjl} W_{kkl}) - |W_{jkl}|

    bool holds(double tol) const {
        return conjugate_asymmetry <= tol && diagonal_imaginary <= tol && min_diagonal >= -tol &&
               cauchy_schwarz_excess <= tol;
    }
};

WTensorCheck check_w_tensor(const WTensor &w);

/// Transfer matrices between input frequency bins ω and output bins Ω.
/// Only frequency-diagonal circuits are constructed, in which case one
/// block per bin is stored and block(ω, Ω) vanishes for ω ≠ Ω.
class FrequencyResolvedTransfer {
public:
    /// Frequency-diagonal circuit with one matrix per grid point.
    static FrequencyResolvedTransfer diagonal(FrequencyGrid grid, std::vector<CMatrix> per_bin);

    /// Frequency-independent circuit.
    static FrequencyResolvedTransfer flat(FrequencyGrid grid, const CMatrix &m);

    /// Full (ω, Ω) kernel; blocks are indexed [ω * bins + Ω] and act as a
    /// density in ω.
    static FrequencyResolvedTransfer general(FrequencyGrid grid, std::vector<CMatrix> blocks);

    const FrequencyGrid &grid() const { return grid_; }
    bool is_diagonal() const { return diagonal_; }
    Eigen::Index out_modes() const { return blocks_.front().rows(); }
    Eigen::Index in_modes() const { return blocks_.front().cols(); }
    /// Block for the diagonal bin `bin`; only valid when is_diagonal().
    const CMatrix &bin(std::size_t bin) const { return blocks_.at(bin); }
    const std::vector<CMatrix> &blocks() const { return blocks_; }

private:
    FrequencyResolvedTransfer(FrequencyGrid grid, std::vector<CMatrix> blocks, bool diagonal);
    FrequencyGrid grid_;
    std::vector<CMatrix> blocks_;
    bool diagonal_;
};

/// V^Ω_{j,l} = ∫dω M^{ω,Ω}_{l, inputs[j]} f_j(ω) and W_{j,k,l} = ∫dΩ V^Ω_{j,l} V^{Ω*}_{k,l}.
/// Photon j has spectrum `spectra[j]` and enters input mode `inputs[j]`.
WTensor build_w_tensor(const FrequencyResolvedTransfer &transfer, const std::vector<GaussianSpectrum> &spectra,
                       const std::vector<int> &inputs);

/// Wavelength dependence of a mesh.
struct Dispersion {
    /// dt/dω per coupler, same order as MeshParams::couplers; empty = none.
    std::vector<double> transmissivity_slopes;
    /// delays[layer][mode]: extra propagation time on `mode` just before
    /// `layer`, applied as e^{iωτ}; empty = none.
    std::vector<std::vector<double>> delays;
    /// Frequency at which each coupler has its nominal transmissivity.
    double reference_frequency = 0.0;
};

struct FrequencyMesh {
    FrequencyResolvedTransfer transfer;
    int clamped_bins = 0;  // bins where some t(ω) left [0, 1]
    bool warning = false;  // clamped on more than 1% of bins
};

FrequencyMesh frequency_dependent_mesh(const MeshParams &params, const Dispersion &dispersion,
                                       const FrequencyGrid &grid);

}  // namespace photonsim
