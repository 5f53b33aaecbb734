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
 * Brute-force reference computations for tiny atom numbers.
 *
 * Nothing here calls into split_state, assemblage or criteria code: the
 * split state is built by expanding creation operators through a 50/50
 * beam splitter in the four-mode Fock space, partial traces are explicit
 * index sums, conditional moment matrices use a projection formula instead
 * of a covariance pseudo-inverse, and the angle optimization is an
 * exhaustive grid. Only the spin matrices are shared.
 */

#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "steerhier/criteria.hpp"
#include "steerhier/split_state.hpp"

namespace steer::oracle {

inline constexpr int kMaxOracleAtoms = 4;

/// Occupations (n_up_A, n_down_A, n_up_B, n_down_B).
using Occupation = std::array<int, 4>;

struct FockState4Mode {
    int n_total;
    double mu;
    /// Lexicographically ordered occupation tuples summing to n_total.
    std::vector<Occupation> occupations;
    Eigen::VectorXcd amplitudes;

    std::size_t index_of(const Occupation &occ) const;
};

/// OAT state of n_total <= 4 atoms sent through a 50/50 splitter on each
/// spin mode. Throws std::invalid_argument for larger n_total.
FockState4Mode beam_splitter_state(int n_total, double mu);

/// Regroups Fock amplitudes into (N_A, k_A, k_B) sectors.
SplitState to_split_layout(const FockState4Mode &fock);

/// Bob's state by explicit summation over Alice's occupations.
BlockDensityMatrix dense_partial_trace(const FockState4Mode &fock);

/// Exhaustive (phi_X, phi_Y) grid maximum of a criterion, no refinement.
/// delta4 has fixed settings and is evaluated directly.
double fine_grid_criterion(const FockState4Mode &fock, const CriterionSpec &spec, double resolution_deg = 0.25);

}  // namespace steer::oracle
