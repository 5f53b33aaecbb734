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

#pragma once

#include <Eigen/Dense>

namespace steer::linalg {

/// Covariance eigenvalues below this fraction of the largest are treated as zero.
inline constexpr double kPinvRelativeCutoff = 1e-12;
/// Allowed right-hand-side mass outside the support, relative to its norm,
/// on top of the sqrt(cutoff) leakage of near-null directions.
inline constexpr double kSupportTolerance = 1e-8;
/// Most negative eigenvalue tolerated in a covariance matrix.
inline constexpr double kPsdTolerance = 1e-10;

/// Returns gamma^+ rhs for a symmetric positive semidefinite gamma.
///
/// Throws NumericalError if gamma has an eigenvalue below -kPsdTolerance, or if
/// the columns of rhs leave the support of gamma (the part of rhs in the
/// discarded eigenspace exceeds (kSupportTolerance + sqrt(cutoff / lambda_max))
/// * ||rhs||).
Eigen::MatrixXd psd_pseudo_solve(const Eigen::MatrixXd &gamma, const Eigen::MatrixXd &rhs);

/// Returns gamma^+ rhs for gamma = factor^T factor without forming gamma.
///
/// The eigenvalues of gamma come from the singular values of factor, so small
/// ones keep their relative accuracy. Cutoff and support check as in
/// psd_pseudo_solve.
Eigen::MatrixXd gram_pseudo_solve(const Eigen::MatrixXd &factor, const Eigen::MatrixXd &rhs);

struct Eigenpair {
    double value;
    Eigen::Vector3d vector;
};

/// Largest eigenvalue of a symmetric 3x3 matrix.
double lambda_max(const Eigen::Matrix3d &m);

/// Largest eigenpair of a symmetric 3x3 matrix with a deterministic choice of
/// eigenvector: under near-degeneracy (< 1e-12) the candidate with the
/// lexicographically larger |component| pattern wins, and the sign is fixed
/// so that the largest-magnitude component is positive.
Eigenpair top_eigenpair(const Eigen::Matrix3d &m);

}  // namespace steer::linalg
