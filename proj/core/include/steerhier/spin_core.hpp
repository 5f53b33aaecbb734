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
 * Collective spin observables on the symmetric (Dicke) subspace of n
 * spin-1/2 particles.
 *
 * Basis index k counts spins pointing down, so S_z |k> = (n/2 - k) |k>.
 * All matrices are dense; the largest space handled by this library has
 * dimension 41.
 */

#pragma once

#include <Eigen/Dense>

#include <array>
#include <memory>
#include <vector>

namespace steer {

using Complex = std::complex<double>;

/// Symmetric subspace of `n_particles` spin-1/2 particles.
class DickeSpace {
   public:
    explicit DickeSpace(int n_particles);

    int n_particles() const { return n_; }
    int dim() const { return n_ + 1; }
    /// Total spin quantum number j = n/2.
    double spin() const { return 0.5 * n_; }

    friend bool operator==(const DickeSpace &, const DickeSpace &) = default;

   private:
    int n_;
};

/// A dense matrix verified to be Hermitian within 1e-12 at construction.
class HermitianOp {
   public:
    explicit HermitianOp(Eigen::MatrixXcd entries);

    const Eigen::MatrixXcd &matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

   private:
    Eigen::MatrixXcd m_;
};

/// Ordered list of observables spanning Bob's (or Alice's) accessible
/// measurements. Order 1: (Sx, Sy, Sz). Order 2 appends the six symmetric
/// quadratic monomials. Order 3 appends the ten symmetrized cubic ones.
struct OperatorBasis {
    DickeSpace space;
    int order;
    std::vector<HermitianOp> ops;

    std::size_t size() const { return ops.size(); }
    const Eigen::MatrixXcd &operator[](std::size_t i) const { return ops[i].matrix(); }
};

/// Direction cos(phi) y + sin(phi) z in the yz-plane. Any real phi is
/// accepted; phi and phi + pi describe the same axis with opposite sign.
class DirectionYZ {
   public:
    explicit DirectionYZ(double phi) : phi_(phi) {}

    double phi() const { return phi_; }
    /// Unit vector in (x, y, z) coordinates.
    Eigen::Vector3d unit() const;

   private:
    double phi_;
};

/// Eigen-decomposition of S_n = cos(phi) S_y + sin(phi) S_z.
struct MeasurementEigenbasis {
    DickeSpace space;
    DirectionYZ direction;
    /// Ascending; equals l - n/2 for l = 0..n.
    Eigen::VectorXd eigenvalues;
    /// Column l is the eigenvector for eigenvalues[l].
    Eigen::MatrixXcd eigenvectors;
};

/// Returns (Sx, Sy, Sz) on the given space.
std::array<HermitianOp, 3> spin_matrices(const DickeSpace &space);

/// Number of operators in the basis of the given order (3, 9 or 19).
int operator_count(int order);

/// Builds the observable set of the given order (1, 2 or 3). Throws
/// std::invalid_argument for any other order.
OperatorBasis operator_set(const DickeSpace &space, int order);

/// Same as operator_set, but shared across callers. Safe for concurrent use.
std::shared_ptr<const OperatorBasis> cached_operator_set(int n_particles, int order);

/// Diagonalizes cos(phi) S_y + sin(phi) S_z. The largest-magnitude component of
/// every eigenvector is made real and positive.
MeasurementEigenbasis measurement_eigenbasis(const DickeSpace &space, const DirectionYZ &direction);

/// n . (Sx, Sy, Sz) on the given space.
Eigen::MatrixXcd spin_along(const DickeSpace &space, const Eigen::Vector3d &n);

}  // namespace steer
