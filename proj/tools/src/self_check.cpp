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


#include <algorithm>
#include <cmath>
#include <string>

#include "steerhier/oracle.hpp"
#include "steerhier/split_state.hpp"
#include "steerhier/tools/sweep.hpp"

namespace steer::tools {

namespace {

constexpr double kStateTol = 1e-12;
constexpr double kCriterionTol = 1e-6;

double max_sector_diff(const SplitState &a, const SplitState &b) {
    double err = 0.0;
    for (std::size_t i = 0; i < a.sectors.size(); ++i) {
        err = std::max(err, (a.sectors[i] - b.sectors[i]).cwiseAbs().maxCoeff());
    }
    return err;
}

double max_block_diff(const BlockDensityMatrix &a, const BlockDensityMatrix &b) {
    double err = 0.0;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
        err = std::max(err, (a.blocks[i].rho - b.blocks[i].rho).cwiseAbs().maxCoeff());
    }
    return err;
}

}  // namespace

std::vector<SelfCheckLine> run_self_check() {
    std::vector<SelfCheckLine> lines;
    auto add = [&](std::string name, double err, double tol) {
        lines.push_back({std::move(name), err, tol, err <= tol});
    };
    for (int n = 1; n <= oracle::kMaxOracleAtoms; ++n) {
        for (double mu : {0.0, 0.1, 0.4}) {
            const std::string tag = "N=" + std::to_string(n) + " mu=" + std::to_string(mu).substr(0, 3);
            const SplitState state = split_state(n, mu);
            const auto fock = oracle::beam_splitter_state(n, mu);
            add(tag + " amplitudes", max_sector_diff(state, oracle::to_split_layout(fock)), kStateTol);
            add(tag + " reduced state", max_block_diff(reduced_state_B(state), oracle::dense_partial_trace(fock)),
                kStateTol);
            if (n < 2) continue;
            for (const CriterionSpec spec : {CriterionSpec{CriterionId::delta1, 1}, CriterionSpec{CriterionId::delta2, 1}}) {
                const double main = spec.id == CriterionId::delta1 ? delta1(state).value : delta2(state, 1).value;
                const double ref = oracle::fine_grid_criterion(fock, spec);
                add(tag + " " + to_string(spec), std::abs(main - ref) / std::max(1.0, std::abs(ref)), kCriterionTol);
            }
        }
    }
    return lines;
}

}  // namespace steer::tools
