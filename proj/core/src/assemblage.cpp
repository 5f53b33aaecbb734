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

#include "steerhier/assemblage.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "steerhier/errors.hpp"
#include "steerhier/linalg.hpp"

namespace steer {

namespace {

constexpr double kPrunedMassTol = 1e-12;
constexpr double kImagResidueTol = 1e-10;

void check_dims(Eigen::Index dim, const OperatorBasis &ops, const char *what) {
    if (ops.space.dim() != dim) {
        std::ostringstream msg;
        msg << what << ": operator dimension " << ops.space.dim() << " does not match state dimension "
            << dim;
        throw std::invalid_argument(msg.str());
    }
}

/// Columns are O_i |psi>.
Eigen::MatrixXcd apply_all(const Eigen::VectorXcd &psi, const OperatorBasis &ops) {
    Eigen::MatrixXcd w(psi.size(), static_cast<Eigen::Index>(ops.size()));
    for (std::size_t i = 0; i < ops.size(); ++i) {
        w.col(static_cast<Eigen::Index>(i)).noalias() = ops[i] * psi;
    }
    return w;
}

/// V with V^T V equal to the covariance: rows are Re and Im of (O_i - <O_i>)|psi>.
Eigen::MatrixXd covariance_factor(const Eigen::VectorXcd &psi, const Eigen::MatrixXcd &w) {
    const Eigen::RowVectorXd mean = (psi.adjoint() * w).real();
    const Eigen::MatrixXcd centered = w - psi * mean.cast<Complex>();
    Eigen::MatrixXd v(2 * centered.rows(), centered.cols());
    v << centered.real(), centered.imag();
    return v;
}

Eigen::MatrixXd covariance_from_images(const Eigen::VectorXcd &psi, const Eigen::MatrixXcd &w) {
    const Eigen::VectorXd mean = (psi.adjoint() * w).real().transpose();
    Eigen::MatrixXd gamma = (w.adjoint() * w).real();
    gamma -= mean * mean.transpose();
    return 0.5 * (gamma + gamma.transpose());
}

Eigen::MatrixXd commutator_from_images(const Eigen::MatrixXcd &h_images, const Eigen::MatrixXcd &x_images) {
    // -i(<X_j H_i> - <H_i X_j>) = 2 Im <X_j psi | H_i psi>.
    const Eigen::MatrixXcd z = h_images.adjoint() * x_images;  // z(i, j) = <H_i psi | X_j psi>
    return -2.0 * z.imag();
}

MomentMatrix moment_from_parts(const Eigen::MatrixXd &comm, const Eigen::MatrixXd &factor) {
    MomentMatrix m;
    m.gain = linalg::gram_pseudo_solve(factor, comm.transpose());
    Eigen::MatrixXd e = comm * m.gain;
    m.entries = 0.5 * (e + e.transpose());
    return m;
}

/// Stacked sqrt(p_b) V_b, so that V^T V is the conditional covariance.
Eigen::MatrixXd conditional_factor(const Assemblage &asm_, int order) {
    Eigen::Index rows = 0;
    for (const auto &o : asm_.outcomes) rows += 2 * o.bob_state.size();
    Eigen::MatrixXd v(rows, operator_count(order));
    Eigen::Index at = 0;
    for (const auto &o : asm_.outcomes) {
        const auto ops = cached_operator_set(o.n_b, order);
        const Eigen::Index r = 2 * o.bob_state.size();
        v.middleRows(at, r) = std::sqrt(o.prob) * covariance_factor(o.bob_state, apply_all(o.bob_state, *ops));
        at += r;
    }
    return v;
}

}  // namespace

double Assemblage::total_probability() const {
    double s = 0.0;
    for (const auto &o : outcomes) s += o.prob;
    return s;
}

BlockDensityMatrix Assemblage::mixture() const {
    BlockDensityMatrix rho;
    rho.blocks.resize(n_atoms + 1);
    for (int n = 0; n <= n_atoms; ++n) {
        rho.blocks[n] = DensityBlock{n, 0.0, Eigen::MatrixXcd::Zero(n + 1, n + 1)};
    }
    for (const auto &o : outcomes) {
        auto &blk = rho.blocks[o.n_b];
        blk.rho += o.prob * o.bob_state * o.bob_state.adjoint();
        blk.weight += o.prob;
    }
    return rho;
}

Assemblage measure_alice(const SplitState &state, const DirectionYZ &direction) {
    Assemblage out{state.n_atoms, direction, {}};
    double pruned = 0.0;
    for (int n_a = 0; n_a <= state.n_atoms; ++n_a) {
        const Eigen::MatrixXcd &a = state.sectors[n_a];
        const MeasurementEigenbasis basis = measurement_eigenbasis(DickeSpace(n_a), direction);
        // Column l of bob holds sum_{k_A} conj(v_l(k_A)) A(k_A, :).
        const Eigen::MatrixXcd bob = a.transpose() * basis.eigenvectors.conjugate();
        for (int l = 0; l <= n_a; ++l) {
            const double p = bob.col(l).squaredNorm();
            if (p < kOutcomePruneThreshold) {
                pruned += p;
                continue;
            }
            out.outcomes.push_back(Outcome{n_a, l, p, state.n_atoms - n_a, bob.col(l) / std::sqrt(p)});
        }
    }
    if (pruned > kPrunedMassTol) {
        throw NumericalError("measure_alice: pruned outcome mass exceeds 1e-12");
    }
    return out;
}

CovMatrix covariance_matrix(const Eigen::VectorXcd &psi, const OperatorBasis &ops) {
    check_dims(psi.size(), ops, "covariance_matrix");
    return {covariance_from_images(psi, apply_all(psi, ops))};
}

CovMatrix covariance_matrix(const DensityBlock &rho, const OperatorBasis &ops) {
    check_dims(rho.rho.rows(), ops, "covariance_matrix");
    const auto l = static_cast<Eigen::Index>(ops.size());
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(l, l);
    if (rho.weight <= 0.0) return {gamma};
    std::vector<Eigen::MatrixXcd> rho_o;
    rho_o.reserve(ops.size());
    Eigen::VectorXd mean(l);
    for (Eigen::Index i = 0; i < l; ++i) {
        rho_o.push_back(rho.rho * ops[i]);
        mean(i) = rho_o.back().trace().real() / rho.weight;
    }
    for (Eigen::Index i = 0; i < l; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            // Re Tr(rho O_i O_j) is the symmetrized second moment.
            const double second = rho_o[i].cwiseProduct(ops[j].transpose()).sum().real() / rho.weight;
            gamma(i, j) = gamma(j, i) = second - mean(i) * mean(j);
        }
    }
    return {gamma};
}

CommMatrix commutator_matrix(const Eigen::VectorXcd &psi, const OperatorBasis &h_ops,
                             const OperatorBasis &x_ops) {
    check_dims(psi.size(), h_ops, "commutator_matrix");
    check_dims(psi.size(), x_ops, "commutator_matrix");
    return {commutator_from_images(apply_all(psi, h_ops), apply_all(psi, x_ops))};
}

CommMatrix commutator_matrix(const DensityBlock &rho, const OperatorBasis &h_ops,
                             const OperatorBasis &x_ops) {
    check_dims(rho.rho.rows(), h_ops, "commutator_matrix");
    check_dims(rho.rho.rows(), x_ops, "commutator_matrix");
    Eigen::MatrixXd c(static_cast<Eigen::Index>(h_ops.size()), static_cast<Eigen::Index>(x_ops.size()));
    const Complex minus_i(0.0, -1.0);
    for (std::size_t i = 0; i < h_ops.size(); ++i) {
        for (std::size_t j = 0; j < x_ops.size(); ++j) {
            const Eigen::MatrixXcd comm = x_ops[j] * h_ops[i] - h_ops[i] * x_ops[j];
            const Complex v = minus_i * (rho.rho * comm).trace();
            if (std::abs(v.imag()) > kImagResidueTol) {
                throw NumericalError("commutator_matrix: entry has an imaginary residue");
            }
            c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v.real();
        }
    }
    return {c};
}

MomentMatrix moment_matrix(const Eigen::VectorXcd &psi, const OperatorBasis &h_ops,
                           const OperatorBasis &x_ops) {
    check_dims(psi.size(), h_ops, "moment_matrix");
    check_dims(psi.size(), x_ops, "moment_matrix");
    const Eigen::MatrixXcd xw = apply_all(psi, x_ops);
    const Eigen::MatrixXcd hw = apply_all(psi, h_ops);
    return moment_from_parts(commutator_from_images(hw, xw), covariance_factor(psi, xw));
}

CovMatrix conditional_covariance(const Assemblage &asm_, int order) {
    const auto l = static_cast<Eigen::Index>(operator_count(order));
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(l, l);
    for (const auto &o : asm_.outcomes) {
        const auto ops = cached_operator_set(o.n_b, order);
        gamma += o.prob * covariance_from_images(o.bob_state, apply_all(o.bob_state, *ops));
    }
    return {0.5 * (gamma + gamma.transpose())};
}

MomentMatrix conditional_moment(const Assemblage &asm_, int x_order) {
    MomentMatrix total{Eigen::MatrixXd::Zero(3, 3), {}};
    for (const auto &o : asm_.outcomes) {
        const auto ops = cached_operator_set(o.n_b, x_order);
        const Eigen::MatrixXcd xw = apply_all(o.bob_state, *ops);
        // S^(1) is the prefix of every operator set.
        const MomentMatrix m =
            moment_from_parts(commutator_from_images(xw.leftCols(3), xw), covariance_factor(o.bob_state, xw));
        total.entries += o.prob * m.entries;
    }
    return total;
}

std::vector<Eigen::VectorXd> optimal_measurements(const Assemblage &asm_, int x_order,
                                                  const Eigen::Vector3d &n) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(asm_.outcomes.size());
    for (const auto &o : asm_.outcomes) {
        const auto ops = cached_operator_set(o.n_b, x_order);
        const Eigen::MatrixXcd xw = apply_all(o.bob_state, *ops);
        const Eigen::MatrixXd gain =
            linalg::gram_pseudo_solve(covariance_factor(o.bob_state, xw),
                                      commutator_from_images(xw.leftCols(3), xw).transpose());
        Eigen::VectorXd m = gain * n;
        const double norm = m.norm();
        if (norm > 0.0) m /= norm;
        out.push_back(std::move(m));
    }
    return out;
}

CommMatrix reduced_commutator(const BlockDensityMatrix &rho_b, int x_order) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, operator_count(x_order));
    for (const auto &blk : rho_b.blocks) {
        if (blk.rho.size() == 0) continue;
        const auto h_ops = cached_operator_set(blk.n_particles, 1);
        const auto x_ops = cached_operator_set(blk.n_particles, x_order);
        c += commutator_matrix(blk, *h_ops, *x_ops).entries;
    }
    return {c};
}

MomentMatrix reid_moment(const Assemblage &asm_, const CommMatrix &reduced_comm, int x_order) {
    if (reduced_comm.entries.cols() != operator_count(x_order)) {
        throw std::invalid_argument("reid_moment: commutator matrix does not match operator order");
    }
    return moment_from_parts(reduced_comm.entries, conditional_factor(asm_, x_order));
}

MomentMatrix reid_moment(const Assemblage &asm_, const BlockDensityMatrix &rho_b, int x_order) {
    return reid_moment(asm_, reduced_commutator(rho_b, x_order), x_order);
}

}  // namespace steer
