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
 * Optimized EPR-steering witnesses for split OAT states.
 *
 * Every angle-optimized criterion has the form
 *
 *     max_{phi_X, phi_Y} lambda_max( F(phi_Y) - 4 Gamma^{B|A}(phi_X) )
 *
 * where Gamma^{B|A} is the conditional covariance of (Sx, Sy, Sz) and F is
 * one of
 *   - delta1: 4 Gamma^{B|A}(phi_Y)          (conditional Fisher information)
 *   - delta2: sum_b p_b M[psi_b, S^(n)]      (conditional moment matrix)
 *   - delta3: C[rho_B] Gamma^{B|A}[S^(n)]^+ C[rho_B]^T   (general Reid)
 * delta4 is the linear-estimate Reid criterion with Alice and Bob measuring
 * along the anti-squeezed and squeezed axes.
 *
 * Since F_delta1 >= F_delta2^(n) >= F_delta2^(n-1) >= F_delta3^(n-1)
 * holds pointwise in the angles, the optimized values obey the same chain
 * provided each search finds its maximum. evaluate_criteria() enforces
 * this by seeding every search with the optima of the criteria it
 * dominates.
 */

#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "steerhier/assemblage.hpp"
#include "steerhier/split_state.hpp"

namespace steer {

enum class CriterionId { delta1, delta2, delta3, delta4 };

std::string_view to_string(CriterionId id);
/// Parses "delta1".."delta4"; throws std::invalid_argument otherwise.
CriterionId parse_criterion_id(std::string_view text);

/// A criterion together with its measurement order (1 for delta1/delta4).
struct CriterionSpec {
    CriterionId id;
    int order = 1;

    friend auto operator<=>(const CriterionSpec &, const CriterionSpec &) = default;
};

/// Parses "delta2:2" style tokens. A missing order means 1.
CriterionSpec parse_criterion_spec(std::string_view token);
std::string to_string(const CriterionSpec &spec);

struct AngleSearchPolicy {
    /// Coarse grid points per angle over [origin, origin + pi).
    int coarse_points = 121;
    int refine_rounds = 3;
    /// Each refinement round shrinks the search window by this factor.
    double refine_shrink = 0.1;
    double origin = 0.0;

    /// Throws std::invalid_argument on coarse_points < 8, refine_rounds < 0 or
    /// shrink outside (0, 1).
    void validate() const;
};

struct AnglePair {
    double phi_x;
    double phi_y;
};

struct CriterionResult {
    CriterionId criterion_id;
    int order;
    double value;
    double phi_x;
    double phi_y;
    /// Bob's optimal generator direction.
    Eigen::Vector3d n_opt;
    /// Per-outcome (delta2), single (delta3) or absent (delta1, delta4).
    std::vector<Eigen::VectorXd> m_opt;
    double first_term;
    double second_term;

    CriterionSpec spec() const { return {criterion_id, order}; }
};

/// Optimal linear-estimate gains and the moments entering delta4. The y and
/// z labels refer to the anti-squeezed and squeezed axes of the yz plane.
struct LinearReidTerms {
    double phi_anti_squeezed;
    double phi_squeezed;
    double g_y;
    double g_z;
    double mean_sx_b;
    /// Var[g_z S_z^A + S_z^B]
    double inferred_var_z;
    /// Var[g_y S_y^A - S_y^B]
    double inferred_var_y;
};

/// Direction phi in [0, pi) of cos(phi) S_y + sin(phi) S_z with minimal
/// variance in the split state (pi/2 when the yz variances are isotropic).
double squeezing_angle(const SplitState &state);

/// Caches per-angle matrices of one split state. Not thread safe; use one
/// evaluator per worker.
class SteeringEvaluator {
   public:
    explicit SteeringEvaluator(SplitState state);

    const SplitState &state() const { return state_; }
    const BlockDensityMatrix &reduced_state() const { return rho_b_; }

    /// 4 Gamma^{B|A} over S^(1) for Alice's setting phi.
    Eigen::Matrix3d fisher_matrix(double phi);
    /// Conditional moment matrix M^{B|A}[S^(1), S^(order)].
    Eigen::Matrix3d moment_matrix(double phi, int order);
    /// Reid moment matrix over S^(order).
    Eigen::Matrix3d reid_matrix(double phi, int order);
    /// The first-term matrix of an angle-optimized criterion.
    Eigen::Matrix3d first_term_matrix(const CriterionSpec &spec, double phi);

    /// lambda_max(F(phi_y) - fisher(phi_x)) for the given criterion.
    double witness(const CriterionSpec &spec, AnglePair angles);

    /// Angle-optimized criterion (delta1..delta3). `seeds` are extra starting
    /// points for local refinement; the result is never worse than any seed.
    CriterionResult optimize(const CriterionSpec &spec, const AngleSearchPolicy &policy,
                             std::span<const AnglePair> seeds = {});

    CriterionResult delta4();
    LinearReidTerms linear_reid_terms() const;

    /// max_phi lambda_max(F(phi)) with optional seed angles.
    std::pair<double, double> optimize_first_term(const CriterionSpec &spec, const AngleSearchPolicy &policy,
                                                  std::span<const double> seeds = {});

   private:
    struct AngleData {
        std::optional<Eigen::Matrix3d> fisher;
        std::map<int, Eigen::Matrix3d> moment;
        std::map<int, Eigen::Matrix3d> reid;
    };

    AngleData &slot(double phi);
    const Assemblage &assemblage_at(double phi);
    const CommMatrix &reduced_comm(int order);

    SplitState state_;
    BlockDensityMatrix rho_b_;
    std::map<double, AngleData> cache_;
    std::map<int, CommMatrix> reduced_comm_;
    std::optional<Assemblage> last_asm_;
};

CriterionResult delta1(const SplitState &state, const AngleSearchPolicy &policy = {});
CriterionResult delta2(const SplitState &state, int x_order, const AngleSearchPolicy &policy = {});
CriterionResult delta3(const SplitState &state, int x_order, const AngleSearchPolicy &policy = {});
CriterionResult delta4(const SplitState &state);

/// True if the first-term matrix of `upper` dominates that of `lower` at
/// every angle, so that optimized(upper) >= optimized(lower).
bool dominates(const CriterionSpec &upper, const CriterionSpec &lower);

/// Evaluates the requested criteria on one evaluator, lower criteria first,
/// seeding each search with the optima of every criterion it dominates.
/// Results are returned in the order requested.
std::vector<CriterionResult> evaluate_criteria(SteeringEvaluator &eval, std::span<const CriterionSpec> specs,
                                               const AngleSearchPolicy &policy);

struct FirstTerms {
    double fisher;
    double fisher_phi;
    /// Keyed by measurement order.
    std::map<int, double> moment;
    std::map<int, double> moment_phi;
    std::map<int, double> reid;
    std::map<int, double> reid_phi;
};

/// Independently angle-optimized first terms (phase sensitivities).
FirstTerms first_terms(const SplitState &state, std::span<const int> orders, const AngleSearchPolicy &policy = {});
FirstTerms first_terms(SteeringEvaluator &eval, std::span<const int> orders, const AngleSearchPolicy &policy);

struct HierarchyCheck {
    std::string relation;  // e.g. "delta1 >= delta2:2"
    double lower;
    double upper;
    bool pass;
};

struct HierarchyReport {
    int n_atoms;
    double mu;
    std::vector<CriterionResult> results;
    std::vector<HierarchyCheck> checks;

    bool all_pass() const;
    const CriterionResult &result(const CriterionSpec &spec) const;
};

/// Relative slack of the hierarchy inequalities: 1e-7 * max(1, |delta|).
inline constexpr double kHierarchySlack = 1e-7;

/// Evaluates delta1, delta2/delta3 at each order, delta4 and checks
/// delta1 >= delta2^(n) >= delta3^(n), delta3^(1) >= delta4 and
/// delta_i^(n-1) <= delta_i^(n) <= delta1.
HierarchyReport hierarchy_check(const SplitState &state, std::span<const int> orders,
                                const AngleSearchPolicy &policy = {});

}  // namespace steer
