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
 * Alice-conditioned assemblages and the second-moment matrices built on
 * Bob's conditional states.
 *
 * Conventions. The generator set H is always S^(1) = (Sx, Sy, Sz). A
 * commutator matrix C has one row per generator H_i and one column per
 * measurement X_j, with C_ij = -i <[X_j, H_i]>. Moment matrices are
 * 3 x 3: M = C Gamma^+ C^T, so that n^T M n is the best inverse squeezing
 * parameter over M in span(X) for the generator n . S. Gamma^+ is applied
 * through the singular values of the centered images (X_j - <X_j>)|psi>,
 * which resolves near-null covariance directions that forming Gamma would
 * lose to rounding.
 */

#pragma once

#include <Eigen/Dense>

#include <vector>

#include "steerhier/spin_core.hpp"
#include "steerhier/split_state.hpp"

namespace steer {

/// Minimum probability for an Alice outcome to be kept.
inline constexpr double kOutcomePruneThreshold = 1e-14;

struct Outcome {
    int n_a;
    /// Index into Alice's ascending eigenbasis; the measured value is l_a - n_a/2.
    int l_a;
    double prob;
    int n_b;
    /// Bob's normalized conditional state on the (n_b + 1)-dimensional space.
    Eigen::VectorXcd bob_state;
};

struct Assemblage {
    int n_atoms;
    DirectionYZ direction;
    std::vector<Outcome> outcomes;

    double total_probability() const;
    /// sum_b p(b) |psi_b><psi_b|, accumulated per particle-number block.
    BlockDensityMatrix mixture() const;
};

/// Symmetric covariance matrix Gamma_ij = <{O_i, O_j}>/2 - <O_i><O_j>.
struct CovMatrix {
    Eigen::MatrixXd entries;
};

/// Rows indexed by the generator set, columns by the measurement set.
struct CommMatrix {
    Eigen::MatrixXd entries;
};

struct MomentMatrix {
    /// 3 x 3 symmetric PSD.
    Eigen::MatrixXd entries;
    /// Gamma^+ C^T, one column per generator. The optimal measurement
    /// coefficients for direction n are proportional to gain * n. Empty for
    /// sums over many states.
    Eigen::MatrixXd gain;
};

/// Projects Alice's half of the split state onto the eigenbasis of
/// cos(phi) S_y + sin(phi) S_z in every particle-number sector.
Assemblage measure_alice(const SplitState &state, const DirectionYZ &direction);

CovMatrix covariance_matrix(const Eigen::VectorXcd &psi, const OperatorBasis &ops);
/// Mixed-state version; the block may be unnormalized (expectations are
/// taken with respect to rho / weight).
CovMatrix covariance_matrix(const DensityBlock &rho, const OperatorBasis &ops);

CommMatrix commutator_matrix(const Eigen::VectorXcd &psi, const OperatorBasis &h_ops,
                             const OperatorBasis &x_ops);
/// Unnormalized: entries are -i Tr(rho [X_j, H_i]) with the block as given.
CommMatrix commutator_matrix(const DensityBlock &rho, const OperatorBasis &h_ops,
                             const OperatorBasis &x_ops);

/// C Gamma^+ C^T for a pure state. Throws NumericalError if C escapes the
/// support of Gamma.
MomentMatrix moment_matrix(const Eigen::VectorXcd &psi, const OperatorBasis &h_ops,
                           const OperatorBasis &x_ops);

/// sum_b p(b) Gamma[psi_b, S^(order)].
CovMatrix conditional_covariance(const Assemblage &asm_, int order);

/// sum_b p(b) M[psi_b, S^(1), S^(x_order)].
MomentMatrix conditional_moment(const Assemblage &asm_, int x_order);

/// Per-outcome optimal measurement coefficients for generator direction n,
/// normalized to unit length (zero vector when the state is insensitive).
std::vector<Eigen::VectorXd> optimal_measurements(const Assemblage &asm_, int x_order,
                                                  const Eigen::Vector3d &n);

/// Commutator matrix of Bob's reduced state, summed over blocks.
CommMatrix reduced_commutator(const BlockDensityMatrix &rho_b, int x_order);

/// C[rho_B] (Gamma^{B|A})^+ C[rho_B]^T: the best single measurement for the
/// whole assemblage.
MomentMatrix reid_moment(const Assemblage &asm_, const BlockDensityMatrix &rho_b, int x_order);

/// Same, with the reduced-state commutator already computed.
MomentMatrix reid_moment(const Assemblage &asm_, const CommMatrix &reduced_comm, int x_order);

}  // namespace steer
