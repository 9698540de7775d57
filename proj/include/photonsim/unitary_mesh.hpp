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

/// Linear map from input-mode amplitudes (columns) to output-mode
/// amplitudes (rows). May be sub-unitary.
struct TransferMatrix {
    CMatrix entries;
    std::string label;

    Eigen::Index out_modes() const { return entries.rows(); }
    Eigen::Index in_modes() const { return entries.cols(); }
};

/// True when `m` is square and m†m equals the identity within `tol` per entry.
bool is_unitary(const CMatrix &m, double tol = 1e-10);

/// True when every column norm is at most 1 + `tol` (no gain anywhere).
bool is_subunitary(const CMatrix &m, double tol = 1e-10);

/// One directional coupler with a phase shifter on its upper input arm.
///
/// Acting on modes (offset, offset + 1) the block is
///
///     [ e^{iφ}√t     i√(1-t) ]
///     [ i e^{iφ}√(1-t)   √t  ]
///
/// so t = 1, φ = 0 is the bar state (identity) and t = 0 swaps the modes.
struct Coupler {
    int layer = 0;
    int offset = 0;  // upper mode index, 0-based
    double transmissivity = 1.0;
    double phase = 0.0;
};

/// 2x2 block of a coupler, in the convention documented on `Coupler`.
Eigen::Matrix2cd coupler_block(double transmissivity, double phase);

struct MeshParams {
    int n_modes = 0;
    std::vector<Coupler> couplers;
    std::vector<double> output_phases;
};

/// Throws InvalidArgument if the mesh is malformed: out-of-range modes,
/// t outside [0,1], phases outside [0,2π), or two couplers of one layer
/// sharing a mode.
void validate_mesh(const MeshParams &params);

/// Number of couplers in a full square mesh on `n` modes.
constexpr int full_mesh_coupler_count(int n) { return n * (n - 1) / 2; }

/// Positions of a full square mesh: `n` layers, even layers couple
/// (0,1),(2,3),…, odd layers couple (1,2),(3,4),…. Transmissivities are
/// left at 1 and phases at 0.
MeshParams square_mesh_layout(int n);

/// Haar-random n×n unitary from an orthonormalised complex Ginibre matrix
/// with the triangular factor's diagonal phases divided out.
TransferMatrix haar_random(int n, std::uint64_t seed);

/// Product of the embedded coupler blocks in layer order, followed by the
/// output phase screen.
TransferMatrix mesh_to_matrix(const MeshParams &params);

/// Exponent β of the transmissivity density β(1-t)^{β-1} used at each
/// coupler of the full square mesh, in the order of
/// `square_mesh_layout(n).couplers`.
std::vector<int> haar_mesh_exponents(int n);

/// Samples a full square mesh whose matrix is Haar distributed: each
/// transmissivity is drawn from its position-dependent density and every
/// phase uniformly.
MeshParams sample_haar_mesh(int n, std::uint64_t seed);

/// Rectangular-mesh decomposition of a unitary. The returned mesh
/// reproduces `u` through `mesh_to_matrix`.
MeshParams clements_decompose(const TransferMatrix &u);

struct GaugeFixed {
    TransferMatrix matrix;
    bool partial = false;  // some first-row/column entry was zero
};

/// Multiplies by input and output phase diagonals so the first row and
/// first column become real and non-negative.
GaugeFixed fix_gauge(const TransferMatrix &t);

}  // namespace photonsim
