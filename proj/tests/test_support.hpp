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


#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace steer::testing {

/// Coherent state along +x on n particles, from the binomial expansion.
inline Eigen::VectorXcd css_x(int n) {
    Eigen::VectorXcd v(n + 1);
    double c = 1.0;  // C(n, k), built incrementally
    for (int k = 0; k <= n; ++k) {
        v(k) = std::sqrt(c / std::pow(2.0, n));
        c = c * (n - k) / (k + 1);
    }
    return v;
}

inline double min_eigenvalue(const Eigen::MatrixXd &m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

inline double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

}  // namespace steer::testing
