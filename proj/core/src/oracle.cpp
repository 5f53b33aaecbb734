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

#include "steerhier/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "steerhier/spin_core.hpp"

namespace steer::oracle {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double choose(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Expectation <psi| O |psi> for a normalized or unnormalized vector.
Complex expect(const Eigen::VectorXcd &psi, const Eigen::MatrixXcd &op) { return psi.dot(op * psi); }

/// Direct formula: Re <psi| (O_i O_j + O_j O_i)/2 |psi> - <O_i><O_j>.
Eigen::MatrixXd direct_covariance(const Eigen::VectorXcd &psi, const OperatorBasis &ops) {
    const auto l = static_cast<Eigen::Index>(ops.size());
    Eigen::MatrixXd g(l, l);
    for (Eigen::Index i = 0; i < l; ++i) {
        for (Eigen::Index j = 0; j < l; ++j) {
            const Eigen::MatrixXcd sym = 0.5 * (ops[i] * ops[j] + ops[j] * ops[i]);
            g(i, j) = expect(psi, sym).real() - expect(psi, ops[i]).real() * expect(psi, ops[j]).real();
        }
    }
    return g;
}

/// Real embedding C^d -> R^{2d}.
Eigen::VectorXd realify(const Eigen::VectorXcd &v) {
    Eigen::VectorXd r(2 * v.size());
    r << v.real(), v.imag();
    return r;
}

/// Best inverse squeezing over span(X) for a pure state, computed as
/// 4 ||P_V (i dH psi)||^2 with V the real span of {dX_j psi}.
Eigen::Matrix3d projected_moment(const Eigen::VectorXcd &psi, const OperatorBasis &x_ops) {
    const Eigen::Index d = psi.size();
    const auto l = static_cast<Eigen::Index>(x_ops.size());
    Eigen::MatrixXd v(2 * d, l);
    for (Eigen::Index j = 0; j < l; ++j) {
        const Eigen::VectorXcd shifted = x_ops[j] * psi - expect(psi, x_ops[j]) * psi;
        v.col(j) = realify(shifted);
    }
    Eigen::MatrixXd u(2 * d, 3);
    for (int i = 0; i < 3; ++i) {
        const Eigen::VectorXcd shifted = x_ops[i] * psi - expect(psi, x_ops[i]) * psi;
        u.col(i) = realify(Complex(0.0, 1.0) * shifted);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(v, Eigen::ComputeThinU);
    const Eigen::VectorXd &sv = svd.singularValues();
    Eigen::Index rank = 0;
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    while (rank < sv.size() && sv(rank) > 1e-6 * smax && sv(rank) > 1e-12) ++rank;
    const Eigen::MatrixXd basis = svd.matrixU().leftCols(rank);
    const Eigen::MatrixXd proj = basis.transpose() * u;
    return 4.0 * proj.transpose() * proj;
}

struct AngleMatrices {
    Eigen::Matrix3d fisher;
    Eigen::Matrix3d first;
};

class DenseOracle {
   public:
    DenseOracle(const FockState4Mode &fock, const CriterionSpec &spec)
        : spec_(spec), layout_(to_split_layout(fock)), rho_b_(dense_partial_trace(fock)) {
        if (spec.id == CriterionId::delta3) {
            reduced_comm_ = Eigen::MatrixXd::Zero(3, operator_count(spec.order));
            for (const auto &blk : rho_b_.blocks) {
                const auto ops = operator_set(DickeSpace(blk.n_particles), spec.order);
                for (int i = 0; i < 3; ++i) {
                    for (std::size_t j = 0; j < ops.size(); ++j) {
                        const Eigen::MatrixXcd comm = ops[j] * ops[i] - ops[i] * ops[j];
                        reduced_comm_(i, static_cast<Eigen::Index>(j)) +=
                            (Complex(0.0, -1.0) * (blk.rho * comm).trace()).real();
                    }
                }
            }
        }
    }

    AngleMatrices at(double phi) const {
        AngleMatrices out{Eigen::Matrix3d::Zero(), Eigen::Matrix3d::Zero()};
        const int order = spec_.id == CriterionId::delta1 ? 1 : spec_.order;
        Eigen::MatrixXd cond_gamma = Eigen::MatrixXd::Zero(operator_count(order), operator_count(order));
        for (int n_a = 0; n_a <= layout_.n_atoms; ++n_a) {
            const int n_b = layout_.n_atoms - n_a;
            const Eigen::MatrixXcd &a = layout_.sectors[n_a];
            const auto sa = spin_matrices(DickeSpace(n_a));
            const Eigen::MatrixXcd sn = std::cos(phi) * sa[1].matrix() + std::sin(phi) * sa[2].matrix();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sn);
            const auto lin = operator_set(DickeSpace(n_b), 1);
            const auto xs = operator_set(DickeSpace(n_b), order);
            for (int l = 0; l <= n_a; ++l) {
                Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n_b + 1);
                for (int ka = 0; ka <= n_a; ++ka) {
                    for (int kb = 0; kb <= n_b; ++kb) {
                        psi(kb) += std::conj(solver.eigenvectors()(ka, l)) * a(ka, kb);
                    }
                }
                const double p = psi.squaredNorm();
                if (p < 1e-14) continue;
                psi /= std::sqrt(p);
                out.fisher += 4.0 * p * direct_covariance(psi, lin);
                if (spec_.id == CriterionId::delta2) {
                    out.first += p * projected_moment(psi, xs);
                } else if (spec_.id == CriterionId::delta3) {
                    cond_gamma += p * direct_covariance(psi, xs);
                }
            }
        }
        if (spec_.id == CriterionId::delta1) {
            out.first = out.fisher;
        } else if (spec_.id == CriterionId::delta3) {
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(cond_gamma);
            cod.setThreshold(1e-12);
            out.first = reduced_comm_ * cod.pseudoInverse() * reduced_comm_.transpose();
        }
        out.first = 0.5 * (out.first + out.first.transpose()).eval();
        return out;
    }

   private:
    CriterionSpec spec_;
    SplitState layout_;
    BlockDensityMatrix rho_b_;
    Eigen::MatrixXd reduced_comm_;
};

double dense_linear_reid(const FockState4Mode &fock) {
    const SplitState layout = to_split_layout(fock);
    struct SectorOps {
        Eigen::VectorXcd v;
        Eigen::MatrixXcd ya, za, yb, zb, xb;
    };
    std::vector<SectorOps> sectors;
    for (int n_a = 0; n_a <= layout.n_atoms; ++n_a) {
        const int n_b = layout.n_atoms - n_a;
        const Eigen::MatrixXcd &a = layout.sectors[n_a];
        SectorOps s;
        s.v.resize(a.size());
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            for (Eigen::Index j = 0; j < a.cols(); ++j) s.v(i * a.cols() + j) = a(i, j);
        }
        const auto sa = spin_matrices(DickeSpace(n_a));
        const auto sb = spin_matrices(DickeSpace(n_b));
        const Eigen::MatrixXcd ia = Eigen::MatrixXcd::Identity(n_a + 1, n_a + 1);
        const Eigen::MatrixXcd ib = Eigen::MatrixXcd::Identity(n_b + 1, n_b + 1);
        s.ya = kron(sa[1].matrix(), ib);
        s.za = kron(sa[2].matrix(), ib);
        s.yb = kron(ia, sb[1].matrix());
        s.zb = kron(ia, sb[2].matrix());
        s.xb = kron(ia, sb[0].matrix());
        sectors.push_back(std::move(s));
    }

    // Squeezed axis: lowest-variance eigenvector of the total-spin yz covariance.
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const auto &s : sectors) {
        const Eigen::MatrixXcd ty = s.ya + s.yb, tz = s.za + s.zb;
        mean += Eigen::Vector2d(expect(s.v, ty).real(), expect(s.v, tz).real());
        cov(0, 0) += expect(s.v, ty * ty).real();
        cov(1, 1) += expect(s.v, tz * tz).real();
        cov(0, 1) += expect(s.v, 0.5 * (ty * tz + tz * ty)).real();
    }
    cov(1, 0) = cov(0, 1);
    cov -= mean * mean.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    Eigen::Vector2d sq = es.eigenvectors().col(0);
    if (es.eigenvalues()(1) - es.eigenvalues()(0) < 1e-12) sq = Eigen::Vector2d(0.0, 1.0);
    const Eigen::Vector2d anti(-sq(1), sq(0));

    double m[11] = {};  // yA, yB, zA, zB, xB, yA2, yB2, zA2, zB2, yAyB, zAzB
    for (const auto &s : sectors) {
        const Eigen::MatrixXcd ya = anti(0) * s.ya + anti(1) * s.za, za = sq(0) * s.ya + sq(1) * s.za;
        const Eigen::MatrixXcd yb = anti(0) * s.yb + anti(1) * s.zb, zb = sq(0) * s.yb + sq(1) * s.zb;
        const Eigen::MatrixXcd *ops[11][2] = {{&ya, nullptr}, {&yb, nullptr}, {&za, nullptr}, {&zb, nullptr},
                                              {&s.xb, nullptr}, {&ya, &ya},   {&yb, &yb},     {&za, &za},
                                              {&zb, &zb},     {&ya, &yb},     {&za, &zb}};
        for (int t = 0; t < 11; ++t) {
            const Eigen::MatrixXcd op = ops[t][1] ? Eigen::MatrixXcd(*ops[t][0] * *ops[t][1]) : *ops[t][0];
            m[t] += expect(s.v, op).real();
        }
    }
    const double var_ya = m[5] - m[0] * m[0], var_yb = m[6] - m[1] * m[1];
    const double var_za = m[7] - m[2] * m[2], var_zb = m[8] - m[3] * m[3];
    const double cov_y = m[9] - m[0] * m[1], cov_z = m[10] - m[2] * m[3];
    // Minimizing over the gain in closed form: Var[gA - B] -> Var B - Cov^2 / Var A.
    const double inferred_y = var_yb - cov_y * cov_y / var_ya;
    const double inferred_z = var_zb - cov_z * cov_z / var_za;
    return m[4] * m[4] / inferred_z - 4.0 * inferred_y;
}

}  // namespace

std::size_t FockState4Mode::index_of(const Occupation &occ) const {
    auto it = std::lower_bound(occupations.begin(), occupations.end(), occ);
    if (it == occupations.end() || *it != occ) {
        throw std::out_of_range("occupation not in the fixed-particle-number space");
    }
    return static_cast<std::size_t>(it - occupations.begin());
}

FockState4Mode beam_splitter_state(int n_total, double mu) {
    if (n_total < 0 || n_total > kMaxOracleAtoms) {
        throw std::invalid_argument("oracle supports at most " + std::to_string(kMaxOracleAtoms) + " atoms");
    }
    FockState4Mode fock{n_total, mu, {}, {}};
    for (int a = 0; a <= n_total; ++a) {
        for (int b = 0; a + b <= n_total; ++b) {
            for (int c = 0; a + b + c <= n_total; ++c) {
                fock.occupations.push_back({a, b, c, n_total - a - b - c});
            }
        }
    }
    fock.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(fock.occupations.size()));

    const double n = n_total;
    for (int k = 0; k <= n_total; ++k) {
        // Two-mode OAT amplitude of (n_up, n_down) = (N - k, k).
        const double m = 0.5 * n - k;
        const Complex c_k = std::sqrt(choose(n_total, k) / std::pow(2.0, n)) * std::polar(1.0, -0.5 * mu * m * m);
        const int up = n_total - k;
        const int down = k;
        // (a^+)^up (b^+)^down / sqrt(up! down!) with a^+ -> (a_A^+ + a_B^+)/sqrt2, same for b.
        for (int i = 0; i <= up; ++i) {
            for (int j = 0; j <= down; ++j) {
                const double coeff = choose(up, i) * choose(down, j) *
                                     std::sqrt(factorial(i) * factorial(up - i) * factorial(j) * factorial(down - j) /
                                               (factorial(up) * factorial(down))) /
                                     std::pow(2.0, 0.5 * n);
                fock.amplitudes(static_cast<Eigen::Index>(fock.index_of({i, j, up - i, down - j}))) += c_k * coeff;
            }
        }
    }
    return fock;
}

SplitState to_split_layout(const FockState4Mode &fock) {
    SplitState s{fock.n_total, fock.mu, {}};
    for (int n_a = 0; n_a <= fock.n_total; ++n_a) {
        s.sectors.push_back(Eigen::MatrixXcd::Zero(n_a + 1, fock.n_total - n_a + 1));
    }
    for (std::size_t i = 0; i < fock.occupations.size(); ++i) {
        const auto &[up_a, down_a, up_b, down_b] = fock.occupations[i];
        s.sectors[up_a + down_a](down_a, down_b) = fock.amplitudes(static_cast<Eigen::Index>(i));
    }
    return s;
}

BlockDensityMatrix dense_partial_trace(const FockState4Mode &fock) {
    BlockDensityMatrix rho;
    for (int n_b = 0; n_b <= fock.n_total; ++n_b) {
        rho.blocks.push_back(DensityBlock{n_b, 0.0, Eigen::MatrixXcd::Zero(n_b + 1, n_b + 1)});
    }
    const auto &occ = fock.occupations;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        for (std::size_t j = 0; j < occ.size(); ++j) {
            if (occ[i][0] != occ[j][0] || occ[i][1] != occ[j][1]) continue;
            const int n_b = occ[i][2] + occ[i][3];
            rho.blocks[n_b].rho(occ[i][3], occ[j][3]) +=
                fock.amplitudes(static_cast<Eigen::Index>(i)) * std::conj(fock.amplitudes(static_cast<Eigen::Index>(j)));
        }
    }
    for (auto &b : rho.blocks) b.weight = b.rho.trace().real();
    return rho;
}

double fine_grid_criterion(const FockState4Mode &fock, const CriterionSpec &spec, double resolution_deg) {
    if (spec.id == CriterionId::delta4) return dense_linear_reid(fock);
    if (!(resolution_deg > 0.0)) throw std::invalid_argument("grid resolution must be positive");

    const int points = static_cast<int>(std::lround(180.0 / resolution_deg));
    const DenseOracle oracle(fock, spec);
    std::vector<AngleMatrices> grid;
    grid.reserve(points);
    for (int i = 0; i < points; ++i) grid.push_back(oracle.at(i * std::numbers::pi / points));

    double best = -std::numeric_limits<double>::infinity();
    for (int x = 0; x < points; ++x) {
        for (int y = 0; y < points; ++y) {
            const Eigen::Matrix3d diff = grid[y].first - grid[x].fisher;
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(diff, Eigen::EigenvaluesOnly);
            best = std::max(best, es.eigenvalues()(2));
        }
    }
    return best;
}

}  // namespace steer::oracle
