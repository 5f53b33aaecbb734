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

#include "steerhier/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "steerhier/errors.hpp"

namespace steer::linalg {

namespace {

// Covariances of exactly zero (n = 0 sectors) must not be inverted.
constexpr double kAbsoluteFloor = 1e-14;

bool lexicographically_larger(const Eigen::Vector3d &a, const Eigen::Vector3d &b) {
    for (int i = 0; i < 3; ++i) {
        const double x = std::abs(a(i));
        const double y = std::abs(b(i));
        if (x > y + 1e-12) return true;
        if (y > x + 1e-12) return false;
    }
    return false;
}

Eigen::Vector3d fix_sign(Eigen::Vector3d v) {
    int pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (v(pivot) < 0) v = -v;
    return v;
}

/// u diag(1/lam) u^T rhs over the eigenvalues above the cutoff.
Eigen::MatrixXd solve_in_eigenbasis(const Eigen::VectorXd &lam, const Eigen::MatrixXd &u, const Eigen::MatrixXd &rhs,
                                    const char *caller) {
    const double lam_max = std::max(lam.maxCoeff(), kAbsoluteFloor);
    const double cutoff = std::max(kPinvRelativeCutoff * lam_max, kAbsoluteFloor);

    const Eigen::MatrixXd projected = u.transpose() * rhs;
    Eigen::MatrixXd scaled = Eigen::MatrixXd::Zero(projected.rows(), projected.cols());
    double escaped = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) > cutoff) {
            scaled.row(i) = projected.row(i) / lam(i);
        } else {
            escaped += projected.row(i).squaredNorm();
        }
    }
    // A consistent rhs = V^T u has |e^T rhs| <= sqrt(lambda_e) |u| along every
    // dropped eigenvector e, so the residual scales like sqrt(cutoff).
    const double rhs_norm = rhs.norm();
    const double tolerance = (kSupportTolerance + std::sqrt(cutoff / lam_max)) * rhs_norm;
    if (std::sqrt(escaped) > tolerance) {
        std::ostringstream msg;
        msg << caller << ": right-hand side leaves the covariance support (residual " << std::sqrt(escaped)
            << ", norm " << rhs_norm << "); the operator span is inconsistent";
        throw NumericalError(msg.str());
    }
    return u * scaled;
}

}  // namespace

Eigen::MatrixXd psd_pseudo_solve(const Eigen::MatrixXd &gamma, const Eigen::MatrixXd &rhs) {
    if (gamma.rows() == 0) {
        return Eigen::MatrixXd::Zero(0, rhs.cols());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gamma);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("psd_pseudo_solve: eigensolver failed");
    }
    const Eigen::VectorXd &lam = solver.eigenvalues();
    if (lam(0) < -kPsdTolerance) {
        std::ostringstream msg;
        msg << "psd_pseudo_solve: covariance has eigenvalue " << lam(0) << " below -" << kPsdTolerance;
        throw NumericalError(msg.str());
    }
    return solve_in_eigenbasis(lam, solver.eigenvectors(), rhs, "psd_pseudo_solve");
}

Eigen::MatrixXd gram_pseudo_solve(const Eigen::MatrixXd &factor, const Eigen::MatrixXd &rhs) {
    if (factor.cols() == 0) {
        return Eigen::MatrixXd::Zero(0, rhs.cols());
    }
    if (factor.rows() == 0) {
        return Eigen::MatrixXd::Zero(factor.cols(), rhs.cols());
    }
    // Thin V is enough when there are at least as many rows as columns; pad otherwise.
    Eigen::MatrixXd padded = factor;
    if (padded.rows() < padded.cols()) {
        padded.conservativeResize(padded.cols(), Eigen::NoChange);
        padded.bottomRows(padded.cols() - factor.rows()).setZero();
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(padded, Eigen::ComputeThinV);
    const Eigen::VectorXd lam = svd.singularValues().cwiseAbs2();
    return solve_in_eigenbasis(lam, svd.matrixV(), rhs, "gram_pseudo_solve");
}

double lambda_max(const Eigen::Matrix3d &m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(2);
}

Eigenpair top_eigenpair(const Eigen::Matrix3d &m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(m);
    const Eigen::Vector3d &lam = solver.eigenvalues();
    Eigen::Vector3d best = solver.eigenvectors().col(2);
    for (int i = 1; i >= 0; --i) {
        if (lam(2) - lam(i) >= 1e-12) break;
        const Eigen::Vector3d cand = solver.eigenvectors().col(i);
        if (lexicographically_larger(cand, best)) best = cand;
    }
    return {lam(2), fix_sign(best)};
}

}  // namespace steer::linalg
