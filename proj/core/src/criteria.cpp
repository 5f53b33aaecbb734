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

#include "steerhier/criteria.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "steerhier/errors.hpp"
#include "steerhier/linalg.hpp"
#include "steerhier/spin_core.hpp"

namespace steer {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBiasTol = 1e-10;

double wrap_angle(double phi) {
    double r = std::fmod(phi, kPi);
    if (r < 0.0) r += kPi;
    if (r >= kPi) r = 0.0;
    return r;
}

int refine_half_width(const AngleSearchPolicy &policy) {
    return static_cast<int>(std::ceil(1.0 / policy.refine_shrink - 1e-9));
}

/// Ordering used to evaluate lower criteria before the ones dominating them.
std::pair<int, int> rank(const CriterionSpec &s) {
    switch (s.id) {
        case CriterionId::delta4:
            return {0, 0};
        case CriterionId::delta3:
            return {1, s.order};
        case CriterionId::delta2:
            return {2, s.order};
        case CriterionId::delta1:
            return {3, 0};
    }
    return {4, 0};
}

struct Candidate {
    double value;
    AnglePair angles;
};

}  // namespace

std::string_view to_string(CriterionId id) {
    switch (id) {
        case CriterionId::delta1:
            return "delta1";
        case CriterionId::delta2:
            return "delta2";
        case CriterionId::delta3:
            return "delta3";
        case CriterionId::delta4:
            return "delta4";
    }
    return "unknown";
}

CriterionId parse_criterion_id(std::string_view text) {
    if (text == "delta1") return CriterionId::delta1;
    if (text == "delta2") return CriterionId::delta2;
    if (text == "delta3") return CriterionId::delta3;
    if (text == "delta4") return CriterionId::delta4;
    throw std::invalid_argument("unknown criterion '" + std::string(text) + "'");
}

CriterionSpec parse_criterion_spec(std::string_view token) {
    const auto colon = token.find(':');
    CriterionSpec spec{parse_criterion_id(token.substr(0, colon)), 1};
    if (colon != std::string_view::npos) {
        const auto digits = token.substr(colon + 1);
        int order = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), order);
        if (ec != std::errc() || ptr != digits.data() + digits.size()) {
            throw std::invalid_argument("bad criterion order in '" + std::string(token) + "'");
        }
        spec.order = order;
    }
    if (spec.id == CriterionId::delta1 || spec.id == CriterionId::delta4) {
        if (spec.order != 1) {
            throw std::invalid_argument(std::string(to_string(spec.id)) + " has no measurement order");
        }
    } else {
        operator_count(spec.order);  // validates 1..3
    }
    return spec;
}

std::string to_string(const CriterionSpec &spec) {
    std::string s(to_string(spec.id));
    if (spec.id == CriterionId::delta2 || spec.id == CriterionId::delta3) {
        s += ':' + std::to_string(spec.order);
    }
    return s;
}

void AngleSearchPolicy::validate() const {
    if (coarse_points < 8) throw std::invalid_argument("angle search needs at least 8 coarse points");
    if (refine_rounds < 0) throw std::invalid_argument("refine_rounds must be non-negative");
    if (!(refine_shrink > 0.0 && refine_shrink < 1.0)) {
        throw std::invalid_argument("refine_shrink must lie in (0, 1)");
    }
    if (!std::isfinite(origin)) throw std::invalid_argument("angle grid origin must be finite");
}

SteeringEvaluator::SteeringEvaluator(SplitState state)
    : state_(std::move(state)), rho_b_(reduced_state_B(state_)) {}

SteeringEvaluator::AngleData &SteeringEvaluator::slot(double phi) { return cache_[phi]; }

const Assemblage &SteeringEvaluator::assemblage_at(double phi) {
    if (!last_asm_ || last_asm_->direction.phi() != phi) {
        last_asm_ = measure_alice(state_, DirectionYZ(phi));
    }
    return *last_asm_;
}

const CommMatrix &SteeringEvaluator::reduced_comm(int order) {
    auto it = reduced_comm_.find(order);
    if (it == reduced_comm_.end()) {
        it = reduced_comm_.emplace(order, reduced_commutator(rho_b_, order)).first;
    }
    return it->second;
}

Eigen::Matrix3d SteeringEvaluator::fisher_matrix(double phi) {
    auto &s = slot(phi);
    if (!s.fisher) {
        s.fisher = 4.0 * conditional_covariance(assemblage_at(phi), 1).entries;
    }
    return *s.fisher;
}

Eigen::Matrix3d SteeringEvaluator::moment_matrix(double phi, int order) {
    auto &s = slot(phi);
    auto it = s.moment.find(order);
    if (it == s.moment.end()) {
        it = s.moment.emplace(order, conditional_moment(assemblage_at(phi), order).entries).first;
    }
    return it->second;
}

Eigen::Matrix3d SteeringEvaluator::reid_matrix(double phi, int order) {
    auto &s = slot(phi);
    auto it = s.reid.find(order);
    if (it == s.reid.end()) {
        const CommMatrix &comm = reduced_comm(order);
        it = s.reid.emplace(order, reid_moment(assemblage_at(phi), comm, order).entries).first;
    }
    return it->second;
}

Eigen::Matrix3d SteeringEvaluator::first_term_matrix(const CriterionSpec &spec, double phi) {
    switch (spec.id) {
        case CriterionId::delta1:
            return fisher_matrix(phi);
        case CriterionId::delta2:
            return moment_matrix(phi, spec.order);
        case CriterionId::delta3:
            return reid_matrix(phi, spec.order);
        case CriterionId::delta4:
            break;
    }
    throw std::invalid_argument("delta4 has no angle-dependent first-term matrix");
}

double SteeringEvaluator::witness(const CriterionSpec &spec, AnglePair angles) {
    const Eigen::Matrix3d f = first_term_matrix(spec, angles.phi_y);
    return linalg::lambda_max(f - fisher_matrix(angles.phi_x));
}

CriterionResult SteeringEvaluator::optimize(const CriterionSpec &spec, const AngleSearchPolicy &policy,
                                            std::span<const AnglePair> seeds) {
    if (spec.id == CriterionId::delta4) return delta4();
    policy.validate();

    const int p = policy.coarse_points;
    const double step = kPi / p;
    std::vector<Eigen::Matrix3d> first(p), second(p);
    for (int i = 0; i < p; ++i) {
        const double phi = policy.origin + i * step;
        second[i] = fisher_matrix(phi);
        first[i] = first_term_matrix(spec, phi);
    }
    Candidate best{-std::numeric_limits<double>::infinity(), {policy.origin, policy.origin}};
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            const double v = linalg::lambda_max(first[j] - second[i]);
            if (v > best.value) best = {v, {policy.origin + i * step, policy.origin + j * step}};
        }
    }

    const int half = refine_half_width(policy);
    auto refine = [&](Candidate c) {
        double window = step;
        std::vector<Eigen::Matrix3d> f(2 * half + 1), g(2 * half + 1);
        for (int round = 0; round < policy.refine_rounds; ++round) {
            const double s = window * policy.refine_shrink;
            const AnglePair centre = c.angles;
            for (int k = -half; k <= half; ++k) {
                g[k + half] = fisher_matrix(centre.phi_x + k * s);
                f[k + half] = first_term_matrix(spec, centre.phi_y + k * s);
            }
            for (int a = -half; a <= half; ++a) {
                for (int b = -half; b <= half; ++b) {
                    const double v = linalg::lambda_max(f[b + half] - g[a + half]);
                    if (v > c.value) c = {v, {centre.phi_x + a * s, centre.phi_y + b * s}};
                }
            }
            window = s;
        }
        return c;
    };

    best = refine(best);
    for (const auto &seed : seeds) {
        const Candidate start{witness(spec, seed), seed};
        if (start.value > best.value) {
            const Candidate r = refine(start);
            if (r.value > best.value) best = r;
        }
    }

    CriterionResult out;
    out.criterion_id = spec.id;
    out.order = spec.id == CriterionId::delta1 ? 1 : spec.order;
    out.phi_x = wrap_angle(best.angles.phi_x);
    out.phi_y = wrap_angle(best.angles.phi_y);
    const Eigen::Matrix3d f = first_term_matrix(spec, out.phi_y);
    const Eigen::Matrix3d g = fisher_matrix(out.phi_x);
    const auto top = linalg::top_eigenpair(f - g);
    out.value = top.value;
    out.n_opt = top.vector;
    out.first_term = out.n_opt.dot(f * out.n_opt);
    out.second_term = out.n_opt.dot(g * out.n_opt);
    if (spec.id == CriterionId::delta2) {
        out.m_opt = optimal_measurements(assemblage_at(out.phi_y), spec.order, out.n_opt);
    } else if (spec.id == CriterionId::delta3) {
        const CommMatrix &comm = reduced_comm(spec.order);
        const MomentMatrix reid = reid_moment(assemblage_at(out.phi_y), comm, spec.order);
        Eigen::VectorXd m = reid.gain * out.n_opt;
        if (m.norm() > 0.0) m.normalize();
        out.m_opt.push_back(std::move(m));
    }
    return out;
}

std::pair<double, double> SteeringEvaluator::optimize_first_term(const CriterionSpec &spec,
                                                                 const AngleSearchPolicy &policy,
                                                                 std::span<const double> seeds) {
    policy.validate();
    const int p = policy.coarse_points;
    const double step = kPi / p;
    auto value_at = [&](double phi) { return linalg::lambda_max(first_term_matrix(spec, phi)); };

    double best_phi = policy.origin;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < p; ++i) {
        const double phi = policy.origin + i * step;
        const double v = value_at(phi);
        if (v > best) {
            best = v;
            best_phi = phi;
        }
    }
    const int half = refine_half_width(policy);
    auto refine = [&](double phi, double v) {
        double window = step;
        for (int round = 0; round < policy.refine_rounds; ++round) {
            const double s = window * policy.refine_shrink;
            const double centre = phi;
            for (int k = -half; k <= half; ++k) {
                const double cand = value_at(centre + k * s);
                if (cand > v) {
                    v = cand;
                    phi = centre + k * s;
                }
            }
            window = s;
        }
        return std::make_pair(v, phi);
    };
    auto [v, phi] = refine(best_phi, best);
    for (double seed : seeds) {
        const double sv = value_at(seed);
        if (sv > v) {
            auto r = refine(seed, sv);
            if (r.first > v) std::tie(v, phi) = r;
        }
    }
    return {v, wrap_angle(phi)};
}

double squeezing_angle(const SplitState &state) {
    // Splitting leaves the total-spin statistics of the OAT state unchanged.
    const OATState oat = oat_state(state.n_atoms, state.mu);
    const auto s = spin_matrices(DickeSpace(state.n_atoms));
    const Eigen::VectorXcd &psi = oat.amplitudes;
    const Eigen::VectorXcd y = s[1].matrix() * psi;
    const Eigen::VectorXcd z = s[2].matrix() * psi;
    const double my = psi.dot(y).real(), mz = psi.dot(z).real();
    const double vyy = y.squaredNorm() - my * my;
    const double vzz = z.squaredNorm() - mz * mz;
    const double cyz = y.dot(z).real() - my * mz;
    // Minimizer of Var[cos(t) S_y + sin(t) S_z] over t.
    if (std::abs(vyy - vzz) < 1e-12 && std::abs(cyz) < 1e-12) return kPi / 2;
    return wrap_angle(0.5 * std::atan2(2.0 * cyz, vyy - vzz) + kPi / 2);
}

LinearReidTerms SteeringEvaluator::linear_reid_terms() const {
    const double phi_sq = squeezing_angle(state_);
    const double phi_anti = wrap_angle(phi_sq + kPi / 2);
    double sy_a = 0, sy_b = 0, sz_a = 0, sz_b = 0, sx_b = 0;
    double sy_a2 = 0, sy_b2 = 0, sz_a2 = 0, sz_b2 = 0, sy_ab = 0, sz_ab = 0;
    for (int n_a = 0; n_a <= state_.n_atoms; ++n_a) {
        const Eigen::MatrixXcd &a = state_.sectors[n_a];
        const auto sa = spin_matrices(DickeSpace(n_a));
        const auto sb = spin_matrices(DickeSpace(state_.n_atoms - n_a));
        // <Phi| O_A (x) O_B |Phi> = sum conj(A) .* (O_A A O_B^T).
        auto both = [&](const Eigen::MatrixXcd &oa, const Eigen::MatrixXcd &ob) {
            return (a.conjugate().cwiseProduct(oa * a * ob.transpose())).sum().real();
        };
        auto on_a = [&](const Eigen::MatrixXcd &oa) { return (a.conjugate().cwiseProduct(oa * a)).sum().real(); };
        auto on_b = [&](const Eigen::MatrixXcd &ob) {
            return (a.conjugate().cwiseProduct(a * ob.transpose())).sum().real();
        };
        // "y" and "z" below are the anti-squeezed and squeezed axes.
        auto axis = [](const std::array<HermitianOp, 3> &sp, double phi) -> Eigen::MatrixXcd {
            return std::cos(phi) * sp[1].matrix() + std::sin(phi) * sp[2].matrix();
        };
        const Eigen::MatrixXcd ya = axis(sa, phi_anti);
        const Eigen::MatrixXcd za = axis(sa, phi_sq);
        const auto &xb = sb[0].matrix();
        const Eigen::MatrixXcd yb = axis(sb, phi_anti);
        const Eigen::MatrixXcd zb = axis(sb, phi_sq);
        sy_a += on_a(ya);
        sz_a += on_a(za);
        sy_b += on_b(yb);
        sz_b += on_b(zb);
        sx_b += on_b(xb);
        sy_a2 += on_a(ya * ya);
        sz_a2 += on_a(za * za);
        sy_b2 += on_b(yb * yb);
        sz_b2 += on_b(zb * zb);
        sy_ab += both(ya, yb);
        sz_ab += both(za, zb);
    }
    for (double mean : {sy_a, sy_b, sz_a, sz_b}) {
        if (std::abs(mean) > kBiasTol) {
            throw NumericalError("linear Reid estimator is biased: transverse spin mean is nonzero");
        }
    }
    const double var_ya = sy_a2 - sy_a * sy_a;
    const double var_za = sz_a2 - sz_a * sz_a;
    const double cov_y = sy_ab - sy_a * sy_b;
    const double cov_z = sz_ab - sz_a * sz_b;
    if (var_ya <= 0.0 || var_za <= 0.0) {
        throw NumericalError("linear Reid gains undefined: Alice's variance vanishes");
    }
    LinearReidTerms t{};
    t.phi_anti_squeezed = phi_anti;
    t.phi_squeezed = phi_sq;
    t.g_y = cov_y / var_ya;
    t.g_z = -cov_z / var_za;
    t.mean_sx_b = sx_b;
    t.inferred_var_y = t.g_y * t.g_y * var_ya - 2.0 * t.g_y * cov_y + (sy_b2 - sy_b * sy_b);
    t.inferred_var_z = t.g_z * t.g_z * var_za + 2.0 * t.g_z * cov_z + (sz_b2 - sz_b * sz_b);
    return t;
}

CriterionResult SteeringEvaluator::delta4() {
    const LinearReidTerms t = linear_reid_terms();
    if (!(t.inferred_var_z > 0.0)) {
        throw NumericalError("delta4: inferred variance of S_z vanishes");
    }
    CriterionResult out;
    out.criterion_id = CriterionId::delta4;
    out.order = 1;
    // Alice infers the anti-squeezed spin for the second term and the
    // squeezed spin for the first; Bob's generator is the anti-squeezed axis.
    out.phi_x = t.phi_anti_squeezed;
    out.phi_y = t.phi_squeezed;
    out.n_opt = DirectionYZ(t.phi_anti_squeezed).unit();
    out.first_term = t.mean_sx_b * t.mean_sx_b / t.inferred_var_z;
    out.second_term = 4.0 * t.inferred_var_y;
    out.value = out.first_term - out.second_term;
    return out;
}

CriterionResult delta1(const SplitState &state, const AngleSearchPolicy &policy) {
    SteeringEvaluator eval(state);
    return eval.optimize({CriterionId::delta1, 1}, policy);
}

CriterionResult delta2(const SplitState &state, int x_order, const AngleSearchPolicy &policy) {
    SteeringEvaluator eval(state);
    return eval.optimize({CriterionId::delta2, x_order}, policy);
}

CriterionResult delta3(const SplitState &state, int x_order, const AngleSearchPolicy &policy) {
    SteeringEvaluator eval(state);
    return eval.optimize({CriterionId::delta3, x_order}, policy);
}

CriterionResult delta4(const SplitState &state) {
    SteeringEvaluator eval(state);
    return eval.delta4();
}

bool dominates(const CriterionSpec &upper, const CriterionSpec &lower) {
    if (upper == lower) return false;
    switch (upper.id) {
        case CriterionId::delta1:
            return lower.id != CriterionId::delta1;
        case CriterionId::delta2:
            return (lower.id == CriterionId::delta2 && lower.order < upper.order) ||
                   (lower.id == CriterionId::delta3 && lower.order <= upper.order) ||
                   lower.id == CriterionId::delta4;
        case CriterionId::delta3:
            return (lower.id == CriterionId::delta3 && lower.order < upper.order) ||
                   lower.id == CriterionId::delta4;
        case CriterionId::delta4:
            return false;
    }
    return false;
}

std::vector<CriterionResult> evaluate_criteria(SteeringEvaluator &eval, std::span<const CriterionSpec> specs,
                                               const AngleSearchPolicy &policy) {
    std::vector<std::size_t> order(specs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rank(specs[a]) < rank(specs[b]); });

    std::vector<std::optional<CriterionResult>> results(specs.size());
    std::vector<std::size_t> done;
    for (std::size_t idx : order) {
        std::vector<AnglePair> seeds;
        for (std::size_t prev : done) {
            if (dominates(specs[idx], specs[prev])) {
                seeds.push_back({results[prev]->phi_x, results[prev]->phi_y});
            }
        }
        results[idx] = eval.optimize(specs[idx], policy, seeds);
        done.push_back(idx);
    }
    std::vector<CriterionResult> out;
    out.reserve(specs.size());
    for (auto &r : results) out.push_back(std::move(*r));
    return out;
}

FirstTerms first_terms(SteeringEvaluator &eval, std::span<const int> orders, const AngleSearchPolicy &policy) {
    std::vector<int> sorted(orders.begin(), orders.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    FirstTerms ft{};
    std::vector<double> seeds;
    for (int n : sorted) {
        std::vector<double> reid_seeds;
        for (const auto &[m, phi] : ft.reid_phi) reid_seeds.push_back(phi);
        auto [rv, rphi] = eval.optimize_first_term({CriterionId::delta3, n}, policy, reid_seeds);
        ft.reid[n] = rv;
        ft.reid_phi[n] = rphi;

        std::vector<double> moment_seeds = reid_seeds;
        moment_seeds.push_back(rphi);
        for (const auto &[m, phi] : ft.moment_phi) moment_seeds.push_back(phi);
        auto [mv, mphi] = eval.optimize_first_term({CriterionId::delta2, n}, policy, moment_seeds);
        ft.moment[n] = mv;
        ft.moment_phi[n] = mphi;
    }
    for (const auto &[m, phi] : ft.reid_phi) seeds.push_back(phi);
    for (const auto &[m, phi] : ft.moment_phi) seeds.push_back(phi);
    std::tie(ft.fisher, ft.fisher_phi) = eval.optimize_first_term({CriterionId::delta1, 1}, policy, seeds);
    return ft;
}

FirstTerms first_terms(const SplitState &state, std::span<const int> orders, const AngleSearchPolicy &policy) {
    SteeringEvaluator eval(state);
    return first_terms(eval, orders, policy);
}

bool HierarchyReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const HierarchyCheck &c) { return c.pass; });
}

const CriterionResult &HierarchyReport::result(const CriterionSpec &spec) const {
    for (const auto &r : results) {
        if (r.spec() == spec) return r;
    }
    throw std::out_of_range("hierarchy report has no result for " + to_string(spec));
}

HierarchyReport hierarchy_check(const SplitState &state, std::span<const int> orders,
                                const AngleSearchPolicy &policy) {
    std::vector<int> sorted(orders.begin(), orders.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.empty()) throw std::invalid_argument("hierarchy_check needs at least one order");

    std::vector<CriterionSpec> specs{{CriterionId::delta1, 1}};
    for (int n : sorted) specs.push_back({CriterionId::delta2, n});
    for (int n : sorted) specs.push_back({CriterionId::delta3, n});
    specs.push_back({CriterionId::delta4, 1});

    SteeringEvaluator eval(state);
    HierarchyReport rep{state.n_atoms, state.mu, evaluate_criteria(eval, specs, policy), {}};

    auto check = [&](const CriterionSpec &lo, const CriterionSpec &hi) {
        const double l = rep.result(lo).value;
        const double u = rep.result(hi).value;
        const double slack = kHierarchySlack * std::max({1.0, std::abs(l), std::abs(u)});
        rep.checks.push_back({to_string(hi) + " >= " + to_string(lo), l, u, l <= u + slack});
    };
    const CriterionSpec d1{CriterionId::delta1, 1};
    for (int n : sorted) {
        check({CriterionId::delta2, n}, d1);
        check({CriterionId::delta3, n}, {CriterionId::delta2, n});
    }
    check({CriterionId::delta4, 1}, {CriterionId::delta3, sorted.front()});
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        check({CriterionId::delta2, sorted[i - 1]}, {CriterionId::delta2, sorted[i]});
        check({CriterionId::delta3, sorted[i - 1]}, {CriterionId::delta3, sorted[i]});
    }
    check({CriterionId::delta3, sorted.back()}, d1);
    return rep;
}

}  // namespace steer
