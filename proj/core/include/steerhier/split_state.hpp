// Copyright 2026 The steerhier Authors
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

/**
 * @file
 * One-axis-twisted states, their 50/50 split into subsystems A and B, and
 * Bob's reduced state.
 *
 * The split state is stored sector by sector: sector N_A is a
 * (N_A + 1) x (N - N_A + 1) matrix whose entry (k_A, k_B) is the amplitude of
 * |k_A>_{N_A} |k_B>_{N - N_A}.
 */

#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace steer {

/// Largest atom number accepted by the state constructors.
inline constexpr int kMaxAtoms = 40;

/// log C(n, k) via log-gamma.
double log_binomial(int n, int k);

/// OAT evolution of the x-polarized coherent state, mu = 2 chi t.
struct OATState {
    int n_atoms;
    double mu;
    Eigen::VectorXcd amplitudes;
};

struct SplitState {
    int n_atoms;
    double mu;
    /// sectors[N_A] has shape (N_A + 1) x (N - N_A + 1).
    std::vector<Eigen::MatrixXcd> sectors;

    double total_norm_squared() const;
    /// Probability of finding N_A particles on Alice's side.
    double sector_weight(int n_a) const;
};

/// One particle-number block of a density matrix. `rho` is unnormalized:
/// its trace equals `weight`.
struct DensityBlock {
    int n_particles;
    double weight;
    Eigen::MatrixXcd rho;
};

/// Density matrix that is block diagonal in particle number.
/// blocks[n] acts on the (n + 1)-dimensional Dicke space of n particles.
struct BlockDensityMatrix {
    std::vector<DensityBlock> blocks;

    double trace() const;
};

/// Throws std::invalid_argument unless 1 <= n_atoms <= kMaxAtoms.
OATState oat_state(int n_atoms, double mu);

SplitState split_state(int n_atoms, double mu);

/// Partial trace over Alice. Sectors of different N_B are never mixed.
BlockDensityMatrix reduced_state_B(const SplitState &state);

/// Quantum Fisher information of a block-diagonal state for a generator that
/// is block diagonal in the same sectors. generator_blocks[n] acts on block n.
/// Throws NumericalError if a block has an eigenvalue below -1e-12.
double mixed_state_qfi(const BlockDensityMatrix &rho, std::span<const Eigen::MatrixXcd> generator_blocks);

/// Convenience overload with generator n . S in every block.
double mixed_state_qfi(const BlockDensityMatrix &rho, const Eigen::Vector3d &n);

/// Diagnostic: the QFI sum evaluated on the analytic ensemble
/// {p(N_A, k_A), |Psi(N_A, k_A)>} as if it were the spectral decomposition of
/// Bob's state. Those ensemble vectors are generally not orthogonal for
/// mu != 0, so this differs from mixed_state_qfi; compare the two to see by
/// how much.
double ensemble_formula_qfi(const SplitState &state, const Eigen::Vector3d &n);

}  // namespace steer
