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

#include "steerhier/spin_core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>

#include "steerhier/errors.hpp"

namespace steer {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kSpectrumTol = 1e-10;

Eigen::MatrixXcd symmetrized_product(const std::array<const Eigen::MatrixXcd *, 3> &f) {
    std::array<int, 3> idx{0, 1, 2};
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(f[0]->rows(), f[0]->cols());
    do {
        acc += (*f[idx[0]]) * (*f[idx[1]]) * (*f[idx[2]]);
    } while (std::next_permutation(idx.begin(), idx.end()));
    acc /= 6.0;
    // Remove rounding asymmetry so the Hermiticity check is exact.
    return 0.5 * (acc + acc.adjoint());
}

}  // namespace

DickeSpace::DickeSpace(int n_particles) : n_(n_particles) {
    if (n_particles < 0) {
        throw std::invalid_argument("DickeSpace: negative particle number");
    }
}

HermitianOp::HermitianOp(Eigen::MatrixXcd entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols()) {
        throw std::invalid_argument("HermitianOp: matrix is not square");
    }
    if (m_.size() > 0 && (m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
        throw NumericalError("HermitianOp: matrix is not Hermitian within 1e-12");
    }
}

Eigen::Vector3d DirectionYZ::unit() const {
    return {0.0, std::cos(phi_), std::sin(phi_)};
}

std::array<HermitianOp, 3> spin_matrices(const DickeSpace &space) {
    const int d = space.dim();
    const double j = space.spin();
    Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(d, d);
    Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const double m = j - k;
        sz(k, k) = m;
        // S+ raises m, which lowers the number of down spins: |k> -> |k-1>.
        if (k > 0) {
            sp(k - 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
        }
    }
    const Eigen::MatrixXcd sm = sp.adjoint();
    const Complex two_i(0.0, 2.0);
    Eigen::MatrixXcd sx = 0.5 * (sp + sm);
    Eigen::MatrixXcd sy = (sp - sm) / two_i;
    return {HermitianOp(std::move(sx)), HermitianOp(std::move(sy)), HermitianOp(std::move(sz))};
}

int operator_count(int order) {
    switch (order) {
        case 1:
            return 3;
        case 2:
            return 9;
        case 3:
            return 19;
        default:
            throw std::invalid_argument("unsupported operator order " + std::to_string(order) +
                                        " (expected 1, 2 or 3)");
    }
}

OperatorBasis operator_set(const DickeSpace &space, int order) {
    operator_count(order);  // validates
    auto s = spin_matrices(space);
    const Eigen::MatrixXcd &x = s[0].matrix();
    const Eigen::MatrixXcd &y = s[1].matrix();
    const Eigen::MatrixXcd &z = s[2].matrix();

    OperatorBasis basis{space, order, {}};
    basis.ops.reserve(operator_count(order));
    basis.ops.push_back(s[0]);
    basis.ops.push_back(s[1]);
    basis.ops.push_back(s[2]);
    if (order >= 2) {
        auto anti = [](const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) -> Eigen::MatrixXcd {
            Eigen::MatrixXcd r = 0.5 * (a * b + b * a);
            return 0.5 * (r + r.adjoint());
        };
        basis.ops.emplace_back(anti(x, x));
        basis.ops.emplace_back(anti(y, y));
        basis.ops.emplace_back(anti(z, z));
        basis.ops.emplace_back(anti(x, y));
        basis.ops.emplace_back(anti(x, z));
        basis.ops.emplace_back(anti(y, z));
    }
    if (order >= 3) {
        const std::array<const Eigen::MatrixXcd *, 3> axis{&x, &y, &z};
        // Multisets a <= b <= c in lexicographic order: xxx, xxy, ..., zzz.
        for (int a = 0; a < 3; ++a) {
            for (int b = a; b < 3; ++b) {
                for (int c = b; c < 3; ++c) {
                    basis.ops.emplace_back(symmetrized_product({axis[a], axis[b], axis[c]}));
                }
            }
        }
    }
    return basis;
}

std::shared_ptr<const OperatorBasis> cached_operator_set(int n_particles, int order) {
    static std::shared_mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const OperatorBasis>> cache;

    const auto key = std::make_pair(n_particles, order);
    {
        std::shared_lock lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) {
            return it->second;
        }
    }
    auto built = std::make_shared<const OperatorBasis>(operator_set(DickeSpace(n_particles), order));
    std::unique_lock lock(mu);
    auto [it, inserted] = cache.emplace(key, std::move(built));
    return it->second;
}

MeasurementEigenbasis measurement_eigenbasis(const DickeSpace &space, const DirectionYZ &direction) {
    auto s = spin_matrices(space);
    const Eigen::MatrixXcd sn =
        std::cos(direction.phi()) * s[1].matrix() + std::sin(direction.phi()) * s[2].matrix();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sn);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("measurement_eigenbasis: eigensolver failed");
    }
    MeasurementEigenbasis out{space, direction, solver.eigenvalues(), solver.eigenvectors()};

    const int d = space.dim();
    for (int l = 0; l < d; ++l) {
        const double expected = l - 0.5 * space.n_particles();
        if (std::abs(out.eigenvalues(l) - expected) > kSpectrumTol) {
            throw NumericalError("measurement_eigenbasis: spectrum deviates from l - n/2");
        }
        if (l > 0 && out.eigenvalues(l) - out.eigenvalues(l - 1) <= kSpectrumTol) {
            throw NumericalError("measurement_eigenbasis: degenerate spectrum");
        }
        auto v = out.eigenvectors.col(l);
        // First index attaining the maximum magnitude (up to rounding).
        const double vmax = v.cwiseAbs().maxCoeff();
        int pivot = 0;
        while (std::abs(v(pivot)) < vmax - 1e-12) {
            ++pivot;
        }
        v *= std::conj(v(pivot)) / std::abs(v(pivot));
        v(pivot) = std::abs(v(pivot));
    }
    return out;
}

Eigen::MatrixXcd spin_along(const DickeSpace &space, const Eigen::Vector3d &n) {
    auto s = spin_matrices(space);
    return n.x() * s[0].matrix() + n.y() * s[1].matrix() + n.z() * s[2].matrix();
}

}  // namespace steer
