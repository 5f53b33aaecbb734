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

#include "steerhier/split_state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "steerhier/errors.hpp"
#include "steerhier/spin_core.hpp"

namespace steer {

namespace {

constexpr double kPsdTol = 1e-12;
constexpr double kPairCutoff = 1e-14;

void validate_inputs(int n_atoms, double mu) {
    if (n_atoms < 1 || n_atoms > kMaxAtoms) {
        throw std::invalid_argument("atom number " + std::to_string(n_atoms) + " outside [1, " +
                                    std::to_string(kMaxAtoms) + "]");
    }
    if (!std::isfinite(mu)) {
        throw std::invalid_argument("twisting strength mu must be finite");
    }
}

/// exp(-i (mu/2) (N/2 - k)^2), k = total number of down spins.
Complex twist_phase(int n_atoms, double mu, int k) {
    const double m = 0.5 * n_atoms - k;
    return std::polar(1.0, -0.5 * mu * m * m);
}

double qfi_from_spectrum(const Eigen::VectorXd &p, const Eigen::MatrixXcd &g_in_eigenbasis) {
    double f = 0.0;
    const int d = static_cast<int>(p.size());
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const double s = p(i) + p(j);
            if (s < kPairCutoff) continue;
            const double diff = p(i) - p(j);
            f += diff * diff / s * std::norm(g_in_eigenbasis(i, j));
        }
    }
    return 2.0 * f;
}

}  // namespace

double log_binomial(int n, int k) {
    if (k < 0 || k > n) {
        throw std::invalid_argument("log_binomial: k outside [0, n]");
    }
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double SplitState::total_norm_squared() const {
    double s = 0.0;
    for (const auto &sec : sectors) s += sec.squaredNorm();
    return s;
}

double SplitState::sector_weight(int n_a) const {
    return sectors.at(n_a).squaredNorm();
}

double BlockDensityMatrix::trace() const {
    double t = 0.0;
    for (const auto &b : blocks) t += b.rho.trace().real();
    return t;
}

OATState oat_state(int n_atoms, double mu) {
    validate_inputs(n_atoms, mu);
    OATState s{n_atoms, mu, Eigen::VectorXcd(n_atoms + 1)};
    const double log_norm = n_atoms * std::numbers::ln2;
    for (int k = 0; k <= n_atoms; ++k) {
        const double mag = std::exp(0.5 * (log_binomial(n_atoms, k) - log_norm));
        s.amplitudes(k) = mag * twist_phase(n_atoms, mu, k);
    }
    return s;
}

SplitState split_state(int n_atoms, double mu) {
    validate_inputs(n_atoms, mu);
    SplitState s{n_atoms, mu, {}};
    s.sectors.reserve(n_atoms + 1);
    const double log_norm = 2.0 * n_atoms * std::numbers::ln2;
    for (int n_a = 0; n_a <= n_atoms; ++n_a) {
        const int n_b = n_atoms - n_a;
        Eigen::MatrixXcd sec(n_a + 1, n_b + 1);
        const double lc_sector = log_binomial(n_atoms, n_a);
        for (int k_a = 0; k_a <= n_a; ++k_a) {
            const double lc_a = log_binomial(n_a, k_a);
            for (int k_b = 0; k_b <= n_b; ++k_b) {
                const double mag =
                    std::exp(0.5 * (lc_sector + lc_a + log_binomial(n_b, k_b) - log_norm));
                sec(k_a, k_b) = mag * twist_phase(n_atoms, mu, k_a + k_b);
            }
        }
        s.sectors.push_back(std::move(sec));
    }
    return s;
}

BlockDensityMatrix reduced_state_B(const SplitState &state) {
    const int n = state.n_atoms;
    BlockDensityMatrix rho;
    rho.blocks.resize(n + 1);
    for (int n_b = 0; n_b <= n; ++n_b) {
        const Eigen::MatrixXcd &a = state.sectors[n - n_b];
        // rho_B(k_B, k_B') = sum_{k_A} A(k_A, k_B) conj(A(k_A, k_B')).
        Eigen::MatrixXcd block = a.transpose() * a.conjugate();
        block = 0.5 * (block + block.adjoint()).eval();
        rho.blocks[n_b] = DensityBlock{n_b, block.trace().real(), std::move(block)};
    }
    return rho;
}

double mixed_state_qfi(const BlockDensityMatrix &rho, std::span<const Eigen::MatrixXcd> generator_blocks) {
    if (generator_blocks.size() != rho.blocks.size()) {
        throw std::invalid_argument("mixed_state_qfi: generator block count mismatch");
    }
    double f = 0.0;
    for (std::size_t b = 0; b < rho.blocks.size(); ++b) {
        const auto &blk = rho.blocks[b];
        if (blk.rho.size() == 0) continue;
        if (generator_blocks[b].rows() != blk.rho.rows()) {
            throw std::invalid_argument("mixed_state_qfi: generator block dimension mismatch");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(blk.rho);
        if (solver.info() != Eigen::Success) {
            throw NumericalError("mixed_state_qfi: eigensolver failed");
        }
        Eigen::VectorXd p = solver.eigenvalues();
        if (p.minCoeff() < -kPsdTol) {
            throw NumericalError("mixed_state_qfi: block " + std::to_string(b) +
                                 " is not positive semidefinite");
        }
        p = p.cwiseMax(0.0);
        const Eigen::MatrixXcd &u = solver.eigenvectors();
        f += qfi_from_spectrum(p, u.adjoint() * generator_blocks[b] * u);
    }
    return f;
}

double mixed_state_qfi(const BlockDensityMatrix &rho, const Eigen::Vector3d &n) {
    std::vector<Eigen::MatrixXcd> gens;
    gens.reserve(rho.blocks.size());
    for (std::size_t b = 0; b < rho.blocks.size(); ++b) {
        gens.push_back(spin_along(DickeSpace(static_cast<int>(rho.blocks[b].rho.rows()) - 1), n));
    }
    return mixed_state_qfi(rho, gens);
}

double ensemble_formula_qfi(const SplitState &state, const Eigen::Vector3d &n) {
    const int total = state.n_atoms;
    double f = 0.0;
    for (int n_a = 0; n_a <= total; ++n_a) {
        const int n_b = total - n_a;
        Eigen::MatrixXcd psi(n_b + 1, n_a + 1);
        Eigen::VectorXd p(n_a + 1);
        for (int k_a = 0; k_a <= n_a; ++k_a) {
            p(k_a) = std::exp(log_binomial(total, n_a) + log_binomial(n_a, k_a) -
                              (total + n_a) * std::numbers::ln2);
            for (int k_b = 0; k_b <= n_b; ++k_b) {
                psi(k_b, k_a) = std::exp(0.5 * (log_binomial(n_b, k_b) - n_b * std::numbers::ln2)) *
                                twist_phase(total, state.mu, k_a + k_b);
            }
        }
        const Eigen::MatrixXcd g = spin_along(DickeSpace(n_b), n);
        f += qfi_from_spectrum(p, psi.adjoint() * g * psi);
    }
    return f;
}

}  // namespace steer
