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


#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "steerhier/errors.hpp"
#include "steerhier/spin_core.hpp"

namespace steer {
namespace {

using Eigen::MatrixXcd;
const Complex I(0.0, 1.0);

double max_abs(const MatrixXcd &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

TEST(SpinMatrices, SingleSpinIsHalfPauli) {
    const auto s = spin_matrices(DickeSpace(1));
    MatrixXcd sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0, 0.5, 0.5, 0;
    sy << 0, -0.5 * I, 0.5 * I, 0;
    sz << 0.5, 0, 0, -0.5;
    EXPECT_LT(max_abs(s[0].matrix() - sx), 1e-15);
    EXPECT_LT(max_abs(s[1].matrix() - sy), 1e-15);
    EXPECT_LT(max_abs(s[2].matrix() - sz), 1e-15);
}

TEST(SpinMatrices, EmptyEnsembleGivesScalarZeros) {
    const auto s = spin_matrices(DickeSpace(0));
    for (const auto &op : s) {
        ASSERT_EQ(op.dim(), 1);
        EXPECT_EQ(op.matrix()(0, 0), Complex(0.0));
    }
}

TEST(SpinMatrices, CommutationRelationsAndCasimir) {
    for (int n = 0; n <= 8; ++n) {
        const auto s = spin_matrices(DickeSpace(n));
        const MatrixXcd &x = s[0].matrix(), &y = s[1].matrix(), &z = s[2].matrix();
        EXPECT_LT(max_abs(x * y - y * x - I * z), 1e-12) << "n=" << n;
        EXPECT_LT(max_abs(y * z - z * y - I * x), 1e-12) << "n=" << n;
        EXPECT_LT(max_abs(z * x - x * z - I * y), 1e-12) << "n=" << n;
        const double j = 0.5 * n;
        const MatrixXcd casimir = x * x + y * y + z * z - j * (j + 1) * MatrixXcd::Identity(n + 1, n + 1);
        EXPECT_LT(max_abs(casimir), 1e-12) << "n=" << n;
    }
}

TEST(SpinMatrices, SzDiagonalFollowsSpinsDownConvention) {
    const auto s = spin_matrices(DickeSpace(5));
    for (int k = 0; k <= 5; ++k) EXPECT_DOUBLE_EQ(s[2].matrix()(k, k).real(), 2.5 - k);
}

TEST(HermitianOp, RejectsNonHermitianInput) {
    MatrixXcd m(2, 2);
    m << 0, 1, 0, 0;
    EXPECT_THROW(HermitianOp{m}, NumericalError);
}

TEST(DickeSpace, RejectsNegativeParticleNumber) { EXPECT_THROW(DickeSpace(-1), std::invalid_argument); }

TEST(OperatorSet, Cardinalities) {
    EXPECT_EQ(operator_set(DickeSpace(2), 1).size(), 3u);
    EXPECT_EQ(operator_set(DickeSpace(2), 1)[0].rows(), 3);
    EXPECT_EQ(operator_set(DickeSpace(4), 2).size(), 9u);
    EXPECT_EQ(operator_set(DickeSpace(4), 3).size(), 19u);
    EXPECT_THROW(operator_set(DickeSpace(2), 0), std::invalid_argument);
    EXPECT_THROW(operator_set(DickeSpace(2), 4), std::invalid_argument);
}

TEST(OperatorSet, SecondOrderListMatchesDirectProducts) {
    const auto s = spin_matrices(DickeSpace(2));
    const MatrixXcd &x = s[0].matrix(), &y = s[1].matrix(), &z = s[2].matrix();
    const MatrixXcd expected[9] = {x, y, z, x * x, y * y, z * z, 0.5 * (x * y + y * x), 0.5 * (x * z + z * x),
                                   0.5 * (y * z + z * y)};
    const auto ops = operator_set(DickeSpace(2), 2);
    for (int i = 0; i < 9; ++i) EXPECT_LT(max_abs(ops[i] - expected[i]), 1e-14) << "op " << i;
}

TEST(OperatorSet, ThirdOrderIsSymmetrizedAndLexicographic) {
    const int n = 3;
    const auto s = spin_matrices(DickeSpace(n));
    const auto ops = operator_set(DickeSpace(n), 3);
    int idx = 9;
    for (int a = 0; a < 3; ++a) {
        for (int b = a; b < 3; ++b) {
            for (int c = b; c < 3; ++c) {
                const MatrixXcd &A = s[a].matrix(), &B = s[b].matrix(), &C = s[c].matrix();
                const MatrixXcd sym = (A * B * C + A * C * B + B * A * C + B * C * A + C * A * B + C * B * A) / 6.0;
                EXPECT_LT(max_abs(ops[idx] - sym), 1e-13) << "op " << idx;
                ++idx;
            }
        }
    }
    EXPECT_EQ(idx, 19);
}

TEST(OperatorSet, EveryOperatorHermitian) {
    for (int n = 0; n <= 6; ++n) {
        for (int order = 1; order <= 3; ++order) {
            const auto ops = operator_set(DickeSpace(n), order);
            for (std::size_t i = 0; i < ops.size(); ++i) EXPECT_LT(max_abs(ops[i] - ops[i].adjoint()), 1e-12);
        }
    }
}

TEST(OperatorSet, CacheReturnsSameContents) {
    const auto a = cached_operator_set(5, 2);
    const auto b = cached_operator_set(5, 2);
    EXPECT_EQ(a.get(), b.get());
    const auto direct = operator_set(DickeSpace(5), 2);
    for (std::size_t i = 0; i < direct.size(); ++i) EXPECT_EQ((*a)[i], direct[i]);
}

TEST(MeasurementEigenbasis, SzBasisIsReorderedIdentity) {
    const auto basis = measurement_eigenbasis(DickeSpace(2), DirectionYZ(std::numbers::pi / 2));
    EXPECT_NEAR(basis.eigenvalues(0), -1.0, 1e-12);
    EXPECT_NEAR(basis.eigenvalues(1), 0.0, 1e-12);
    EXPECT_NEAR(basis.eigenvalues(2), 1.0, 1e-12);
    // Eigenvalue l - 1 belongs to k = 2 - l spins down.
    for (int l = 0; l <= 2; ++l) {
        for (int k = 0; k <= 2; ++k) {
            EXPECT_NEAR(std::abs(basis.eigenvectors(k, l) - Complex(k == 2 - l ? 1.0 : 0.0)), 0.0, 1e-12);
        }
    }
}

TEST(MeasurementEigenbasis, SingleSpinAlongY) {
    const auto basis = measurement_eigenbasis(DickeSpace(1), DirectionYZ(0.0));
    EXPECT_NEAR(basis.eigenvalues(0), -0.5, 1e-12);
    EXPECT_NEAR(basis.eigenvalues(1), 0.5, 1e-12);
}

TEST(MeasurementEigenbasis, SpectrumIsDirectionIndependent) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> phi(0.0, std::numbers::pi);
    for (int t = 0; t < 10; ++t) {
        const auto basis = measurement_eigenbasis(DickeSpace(3), DirectionYZ(phi(rng)));
        for (int l = 0; l <= 3; ++l) EXPECT_NEAR(basis.eigenvalues(l), l - 1.5, 1e-10);
    }
}

TEST(MeasurementEigenbasis, ReconstructsRotatedOperatorAndIsOrthonormal) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> phi(0.0, 2.0 * std::numbers::pi);
    for (int n = 1; n <= 10; ++n) {
        const DickeSpace space(n);
        const auto s = spin_matrices(space);
        for (int t = 0; t < 4; ++t) {
            const double p = phi(rng);
            const auto basis = measurement_eigenbasis(space, DirectionYZ(p));
            const MatrixXcd &v = basis.eigenvectors;
            MatrixXcd recon = MatrixXcd::Zero(n + 1, n + 1);
            for (int l = 0; l <= n; ++l) recon += (l - 0.5 * n) * v.col(l) * v.col(l).adjoint();
            const MatrixXcd target = std::cos(p) * s[1].matrix() + std::sin(p) * s[2].matrix();
            EXPECT_LT(max_abs(recon - target), 1e-10);
            EXPECT_LT(max_abs(v.adjoint() * v - MatrixXcd::Identity(n + 1, n + 1)), 1e-10);
        }
    }
}

TEST(MeasurementEigenbasis, LargestComponentIsRealPositive) {
    const auto basis = measurement_eigenbasis(DickeSpace(6), DirectionYZ(0.37));
    for (int l = 0; l <= 6; ++l) {
        Eigen::Index k = 0;
        basis.eigenvectors.col(l).cwiseAbs().maxCoeff(&k);
        EXPECT_GT(basis.eigenvectors(k, l).real(), 0.0);
        EXPECT_NEAR(basis.eigenvectors(k, l).imag(), 0.0, 1e-14);
    }
}

TEST(SpinAlong, IsLinearInDirection) {
    const DickeSpace space(4);
    const auto s = spin_matrices(space);
    const Eigen::Vector3d n(0.2, -0.5, 0.7);
    const MatrixXcd expected = n(0) * s[0].matrix() + n(1) * s[1].matrix() + n(2) * s[2].matrix();
    EXPECT_LT(max_abs(spin_along(space, n) - expected), 1e-14);
}

}  // namespace
}  // namespace steer
