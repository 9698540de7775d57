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

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace photonsim {

namespace {

// Below this modulus an element counts as already nulled.
constexpr double kNullThreshold = 1e-14;

Complex unit_phase(double phi) { return std::polar(1.0, phi); }


// rows (p, p+1) <- B * rows
void apply_block_rows(CMatrix &m, int p, const Eigen::Matrix2cd &b) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const Complex top = m(p, c);
        const Complex bottom = m(p + 1, c);
        m(p, c) = b(0, 0) * top + b(0, 1) * bottom;
        m(p + 1, c) = b(1, 0) * top + b(1, 1) * bottom;
    }
}

// cols (p, p+1) <- cols * B
void apply_block_cols(CMatrix &m, int p, const Eigen::Matrix2cd &b) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const Complex left = m(r, p);
        const Complex right = m(r, p + 1);
        m(r, p) = left * b(0, 0) + right * b(1, 0);
        m(r, p + 1) = left * b(0, 1) + right * b(1, 1);
    }
}

struct Op {
    int offset;
    double transmissivity;
    double phase;
};

// Places couplers, given in application order, into the earliest layer
// that follows every previous coupler touching the same modes and whose
// parity matches the square-mesh geometry.
std::vector<Coupler> assign_layers(int n, const std::vector<Op> &ops) {
    std::vector<int> next_free(static_cast<std::size_t>(n), 0);
    std::vector<Coupler> out;
    out.reserve(ops.size());
    for (const Op &op : ops) {
        int layer = std::max(next_free[op.offset], next_free[op.offset + 1]);
        if ((layer % 2) != (op.offset % 2)) {
            ++layer;
        }
        next_free[op.offset] = layer + 1;
        next_free[op.offset + 1] = layer + 1;
        out.push_back({layer, op.offset, op.transmissivity, op.phase});
    }
    std::stable_sort(out.begin(), out.end(), [](const Coupler &a, const Coupler &b) {
        return a.layer != b.layer ? a.layer < b.layer : a.offset < b.offset;
    });
    return out;
}

}  // namespace

bool is_unitary(const CMatrix &m, double tol) {
    if (m.rows() != m.cols() || !m.allFinite()) {
        return false;
    }
    const CMatrix gram = m.adjoint() * m;
    return max_abs(gram - CMatrix::Identity(m.rows(), m.cols())) <= tol;
}

bool is_subunitary(const CMatrix &m, double tol) {
    if (!m.allFinite()) {
        return false;
    }
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (m.col(c).norm() > 1.0 + tol) {
            return false;
        }
    }
    return true;
}

Eigen::Matrix2cd coupler_block(double transmissivity, double phase) {
    const double ct = std::sqrt(transmissivity);
    const double st = std::sqrt(std::max(0.0, 1.0 - transmissivity));
    const Complex e = unit_phase(phase);
    const Complex i(0.0, 1.0);
    Eigen::Matrix2cd b;
    b << e * ct, i * st, i * e * st, ct;
    return b;
}

void validate_mesh(const MeshParams &params) {
    const int n = params.n_modes;
    if (n < 1) {
        throw InvalidArgument("mesh must have at least one mode");
    }
    if (static_cast<int>(params.output_phases.size()) != n) {
        throw InvalidArgument("mesh needs one output phase per mode");
    }
    for (double phi : params.output_phases) {
        if (!(phi >= 0.0 && phi < kTwoPi)) {
            throw InvalidArgument("output phase outside [0, 2pi): " + std::to_string(phi));
        }
    }
    // (layer, mode) pairs already claimed
    std::vector<std::pair<int, int>> used;
    used.reserve(params.couplers.size() * 2);
    for (const Coupler &c : params.couplers) {
        if (c.layer < 0 || c.offset < 0 || c.offset + 1 >= n) {
            throw InvalidArgument("coupler at layer " + std::to_string(c.layer) + " offset " +
                                  std::to_string(c.offset) + " is outside a " + std::to_string(n) +
                                  "-mode mesh");
        }
        if (!(c.transmissivity >= 0.0 && c.transmissivity <= 1.0)) {
            throw InvalidArgument("transmissivity outside [0, 1]: " + std::to_string(c.transmissivity));
        }
        if (!(c.phase >= 0.0 && c.phase < kTwoPi)) {
            throw InvalidArgument("coupler phase outside [0, 2pi): " + std::to_string(c.phase));
        }
        used.emplace_back(c.layer, c.offset);
        used.emplace_back(c.layer, c.offset + 1);
    }
    std::sort(used.begin(), used.end());
    if (std::adjacent_find(used.begin(), used.end()) != used.end()) {
        throw InvalidArgument("overlapping couplers within one layer");
    }
}

MeshParams square_mesh_layout(int n) {
    if (n < 1) {
        throw InvalidArgument("mesh must have at least one mode");
    }
    MeshParams p;
    p.n_modes = n;
    p.output_phases.assign(static_cast<std::size_t>(n), 0.0);
    for (int layer = 0; layer < n; ++layer) {
        for (int offset = layer % 2; offset + 1 < n; offset += 2) {
            p.couplers.push_back({layer, offset, 1.0, 0.0});
        }
    }
    return p;
}

TransferMatrix haar_random(int n, std::uint64_t seed) {
    if (n < 1) {
        throw InvalidArgument("haar_random needs n >= 1");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    CMatrix z(n, n);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) {
            z(r, c) = Complex(gauss(rng), gauss(rng));
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    const CMatrix &packed = qr.matrixQR();
    for (int k = 0; k < n; ++k) {
        const Complex rkk = packed(k, k);
        const double mag = std::abs(rkk);
        q.col(k) *= mag > 0.0 ? rkk / mag : Complex(1.0, 0.0);
    }
    return {std::move(q), "haar(n=" + std::to_string(n) + ",seed=" + std::to_string(seed) + ")"};
}

TransferMatrix mesh_to_matrix(const MeshParams &params) {
    validate_mesh(params);
    std::vector<Coupler> ordered = params.couplers;
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const Coupler &a, const Coupler &b) { return a.layer < b.layer; });
    CMatrix u = CMatrix::Identity(params.n_modes, params.n_modes);
    for (const Coupler &c : ordered) {
        apply_block_rows(u, c.offset, coupler_block(c.transmissivity, c.phase));
    }
    for (int k = 0; k < params.n_modes; ++k) {
        u.row(k) *= unit_phase(params.output_phases[static_cast<std::size_t>(k)]);
    }
    return {std::move(u), "mesh"};
}

std::vector<int> haar_mesh_exponents(int n) {
    if (n < 2) {
        throw InvalidArgument("haar_mesh_exponents needs n >= 2");
    }
    // Nulling step s (0-based) of diagonal i in the rectangular
    // decomposition of a Haar unitary has transmissivity density
    // β(1-t)^{β-1} with β = min(2s + 1, 2(i - s + 1)). Route the steps
    // through the same layer assignment as clements_decompose to find
    // where each one lands. `transmissivity` carries β here.
    std::vector<Op> right_steps;
    std::vector<Op> left_steps;
    for (int i = 0; i + 1 < n; ++i) {
        for (int s = 0; s <= i; ++s) {
            const double beta = std::min(2 * s + 1, 2 * (i - s + 1));
            if (i % 2 == 0) {
                right_steps.push_back({i - s, beta, 0.0});
            } else {
                left_steps.push_back({n + s - i - 2, beta, 0.0});
            }
        }
    }
    std::vector<Op> sequence = right_steps;
    sequence.insert(sequence.end(), left_steps.rbegin(), left_steps.rend());
    const std::vector<Coupler> placed = assign_layers(n, sequence);

    const MeshParams layout = square_mesh_layout(n);
    std::vector<int> beta;
    beta.reserve(layout.couplers.size());
    for (const Coupler &c : layout.couplers) {
        const auto it = std::find_if(placed.begin(), placed.end(), [&c](const Coupler &p) {
            return p.layer == c.layer && p.offset == c.offset;
        });
        if (it == placed.end()) {
            throw std::logic_error("rectangular decomposition does not cover the square mesh");
        }
        beta.push_back(static_cast<int>(it->transmissivity));
    }
    return beta;
}

MeshParams sample_haar_mesh(int n, std::uint64_t seed) {
    if (n < 2) {
        throw InvalidArgument("sample_haar_mesh needs n >= 2");
    }
    MeshParams mesh = square_mesh_layout(n);
    const std::vector<int> beta = haar_mesh_exponents(n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t k = 0; k < mesh.couplers.size(); ++k) {
        // inverse CDF of β(1-t)^{β-1}
        const double u = unit(rng);
        mesh.couplers[k].transmissivity = 1.0 - std::pow(1.0 - u, 1.0 / beta[k]);
        mesh.couplers[k].phase = wrap_phase(kTwoPi * unit(rng));
    }
    for (double &phi : mesh.output_phases) {
        phi = wrap_phase(kTwoPi * unit(rng));
    }
    return mesh;
}

MeshParams clements_decompose(const TransferMatrix &input) {
    const CMatrix &u0 = input.entries;
    if (u0.rows() != u0.cols()) {
        throw InvalidArgument("clements_decompose needs a square matrix");
    }
    if (!is_unitary(u0, 1e-8)) {
        throw InvalidArgument("clements_decompose needs a unitary matrix");
    }
    const int n = static_cast<int>(u0.rows());
    CMatrix u = u0;
    std::vector<Op> right_ops;
    std::vector<Op> left_ops;

    for (int i = 0; i + 1 < n; ++i) {
        if (i % 2 == 0) {
            for (int j = 0; j <= i; ++j) {
                const int row = n - 1 - j;
                const int col = i - j;
                const Complex a = u(row, col);
                const Complex b = u(row, col + 1);
                Op op{col, 1.0, 0.0};
                if (std::abs(a) >= kNullThreshold) {
                    op.transmissivity = std::norm(b) / (std::norm(a) + std::norm(b));
                    op.phase = wrap_phase(std::arg(a) - std::arg(b) - kPi / 2);
                }
                apply_block_cols(u, col, coupler_block(op.transmissivity, op.phase).adjoint());
                u(row, col) = 0.0;
                right_ops.push_back(op);
            }
        } else {
            for (int j = 1; j <= i + 1; ++j) {
                const int row = n + j - i - 2;
                const int col = j - 1;
                const Complex a = u(row - 1, col);
                const Complex b = u(row, col);
                Op op{row - 1, 1.0, 0.0};
                if (std::abs(b) >= kNullThreshold) {
                    op.transmissivity = std::norm(a) / (std::norm(a) + std::norm(b));
                    op.phase = wrap_phase(std::arg(b) - std::arg(a) + kPi / 2);
                }
                apply_block_rows(u, row - 1, coupler_block(op.transmissivity, op.phase));
                u(row, col) = 0.0;
                left_ops.push_back(op);
            }
        }
    }

    // u is now diagonal: u0 = L_1^† … L_k^† D R_m … R_1. Move each L^†
    // to the right of the diagonal using
    //   B(t, φ)^† diag(d1, d2) = diag(-e^{-iφ} d2, d2) B(t, arg(-d1/d2)).
    CVector d = u.diagonal();
    std::vector<Op> moved;
    moved.reserve(left_ops.size());
    for (auto it = left_ops.rbegin(); it != left_ops.rend(); ++it) {
        const int p = it->offset;
        const Complex d1 = d(p);
        const Complex d2 = d(p + 1);
        moved.push_back({p, it->transmissivity, wrap_phase(std::arg(-d1 / d2))});
        d(p) = -unit_phase(-it->phase) * d2;
    }
    // application order: R_1 … R_m, then the moved blocks B'_k … B'_1
    std::vector<Op> sequence = right_ops;
    sequence.insert(sequence.end(), moved.begin(), moved.end());

    MeshParams mesh;
    mesh.n_modes = n;
    mesh.couplers = assign_layers(n, sequence);
    mesh.output_phases.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        mesh.output_phases[static_cast<std::size_t>(k)] = wrap_phase(std::arg(d(k)));
    }
    return mesh;
}

GaugeFixed fix_gauge(const TransferMatrix &t) {
    const CMatrix &m = t.entries;
    GaugeFixed out{t, false};
    if (m.size() == 0) {
        return out;
    }
    const auto phase_of = [&out](Complex z) {
        const double mag = std::abs(z);
        if (mag == 0.0) {
            out.partial = true;
            return Complex(1.0, 0.0);
        }
        return std::conj(z / mag);
    };
    CVector row_phase(m.rows());
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        row_phase(k) = phase_of(m(k, 0));
    }
    CVector col_phase(m.cols());
    col_phase(0) = 1.0;
    for (Eigen::Index j = 1; j < m.cols(); ++j) {
        col_phase(j) = phase_of(row_phase(0) * m(0, j));
    }
    CMatrix fixed = row_phase.asDiagonal() * m * col_phase.asDiagonal();
    // exact zeros for the constrained imaginary parts
    for (Eigen::Index k = 0; k < fixed.rows(); ++k) {
        fixed(k, 0) = std::abs(fixed(k, 0));
    }
    for (Eigen::Index j = 1; j < fixed.cols(); ++j) {
        fixed(0, j) = std::abs(fixed(0, j));
    }
    out.matrix.entries = std::move(fixed);
    return out;
}

}  // namespace photonsim
