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

#include "steerhier/oracle.hpp"
#include "test_support.hpp"

namespace steer {
namespace {

using testing::binomial;

TEST(BeamSplitter, OccupationsAreLexicographicAndNormPreserved) {
    for (int n = 0; n <= oracle::kMaxOracleAtoms; ++n) {
        const auto fock = oracle::beam_splitter_state(n, 0.7);
        EXPECT_EQ(fock.occupations.size(), static_cast<std::size_t>(binomial(n + 3, 3)));
        EXPECT_TRUE(std::is_sorted(fock.occupations.begin(), fock.occupations.end()));
        EXPECT_NEAR(fock.amplitudes.squaredNorm(), 1.0, 1e-12);
        for (std::size_t i = 0; i < fock.occupations.size(); ++i) {
            EXPECT_EQ(fock.index_of(fock.occupations[i]), i);
        }
    }
    EXPECT_THROW(oracle::beam_splitter_state(5, 0.0), std::invalid_argument);
}

TEST(BeamSplitter, TwoAtomsMatchClosedFormAmplitudes) {
    const auto layout = oracle::to_split_layout(oracle::beam_splitter_state(2, 0.0));
    for (int na = 0; na <= 2; ++na) {
        for (int ka = 0; ka <= na; ++ka) {
            for (int kb = 0; kb <= 2 - na; ++kb) {
                const double expected = std::sqrt(binomial(2, na) * binomial(na, ka) * binomial(2 - na, kb)) / 4.0;
                EXPECT_NEAR(std::abs(layout.sectors[na](ka, kb) - Complex(expected)), 0.0, 1e-12);
            }
        }
    }
}

TEST(BeamSplitter, SingleAtomSplitsEvenly) {
    for (double mu : {0.0, 1.3}) {
        const auto layout = oracle::to_split_layout(oracle::beam_splitter_state(1, mu));
        EXPECT_NEAR(layout.sector_weight(0), 0.5, 1e-12);
        EXPECT_NEAR(layout.sector_weight(1), 0.5, 1e-12);
    }
}

TEST(BeamSplitter, MatchesSplitStateEntrywise) {
    for (int n = 1; n <= oracle::kMaxOracleAtoms; ++n) {
        for (double mu : {0.0, 0.25, 1.7, -3.0}) {
            const auto a = split_state(n, mu);
            const auto b = oracle::to_split_layout(oracle::beam_splitter_state(n, mu));
            for (int na = 0; na <= n; ++na) {
                EXPECT_LT((a.sectors[na] - b.sectors[na]).cwiseAbs().maxCoeff(), 1e-12) << n << " " << mu;
            }
        }
    }
}

TEST(DensePartialTrace, MatchesReducedState) {
    for (int n = 1; n <= oracle::kMaxOracleAtoms; ++n) {
        for (double mu : {0.0, 0.6}) {
            const auto a = reduced_state_B(split_state(n, mu));
            const auto b = oracle::dense_partial_trace(oracle::beam_splitter_state(n, mu));
            EXPECT_NEAR(b.trace(), 1.0, 1e-12);
            for (int nb = 0; nb <= n; ++nb) {
                EXPECT_LT((a.blocks[nb].rho - b.blocks[nb].rho).cwiseAbs().maxCoeff(), 1e-12);
            }
        }
    }
}

TEST(DensePartialTrace, BlockRankBoundedBySchmidtCount) {
    const auto rho = oracle::dense_partial_trace(oracle::beam_splitter_state(4, 0.9));
    for (const auto &blk : rho.blocks) {
        // Alice holds N_A + 1 states in the matching sector.
        const int alice_states = 4 - blk.n_particles + 1;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(blk.rho, Eigen::EigenvaluesOnly);
        const int rank = static_cast<int>((es.eigenvalues().array() > 1e-12).count());
        EXPECT_LE(rank, alice_states);
    }
}

TEST(FineGrid, AgreesWithRefinedSearch) {
    const auto fock = oracle::beam_splitter_state(4, 0.1);
    const auto state = split_state(4, 0.1);
    EXPECT_NEAR(oracle::fine_grid_criterion(fock, {CriterionId::delta1, 1}), delta1(state).value, 1e-6);
    EXPECT_NEAR(oracle::fine_grid_criterion(fock, {CriterionId::delta2, 1}), delta2(state, 1).value, 1e-6);
    EXPECT_NEAR(oracle::fine_grid_criterion(fock, {CriterionId::delta2, 2}), delta2(state, 2).value, 1e-6);
    EXPECT_NEAR(oracle::fine_grid_criterion(fock, {CriterionId::delta3, 1}), delta3(state, 1).value, 1e-6);
    EXPECT_NEAR(oracle::fine_grid_criterion(fock, {CriterionId::delta4, 1}), delta4(state).value, 1e-10);
}

TEST(FineGrid, ZeroAtProductState) {
    const auto fock = oracle::beam_splitter_state(4, 0.0);
    EXPECT_NEAR(oracle::fine_grid_criterion(fock, {CriterionId::delta2, 1}), 0.0, 1e-9);
}

TEST(FineGrid, CoarserGridNeverExceedsFiner) {
    const auto fock = oracle::beam_splitter_state(3, 0.8);
    for (const CriterionSpec spec : {CriterionSpec{CriterionId::delta1, 1}, CriterionSpec{CriterionId::delta2, 1}}) {
        EXPECT_LE(oracle::fine_grid_criterion(fock, spec, 1.0), oracle::fine_grid_criterion(fock, spec, 0.25) + 1e-9);
    }
}

TEST(FineGrid, Delta4MatchesForOddAtomNumber) {
    for (double mu : {0.2, 0.9}) {
        EXPECT_NEAR(oracle::fine_grid_criterion(oracle::beam_splitter_state(3, mu), {CriterionId::delta4, 1}),
                    delta4(split_state(3, mu)).value, 1e-10);
    }
}

}  // namespace
}  // namespace steer
