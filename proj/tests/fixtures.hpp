// Copyright 2026 The opcross Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded configuration generators shared by unit and acceptance tests.

#ifndef OPCROSS_TESTS_FIXTURES_HPP
#define OPCROSS_TESTS_FIXTURES_HPP

#include <array>
#include <vector>

#include "opcross/grassmann.hpp"
#include "opcross/random.hpp"

namespace fixture {

using opcross::Rng;
using opcross::Subspace;
using Eigen::MatrixXd;

/// Four random k-dimensional subspaces of R^{2k} in general position.
inline std::vector<Subspace<double>> half_dimensional(Eigen::Index k, Rng& rng) {
  std::vector<Subspace<double>> out;
  for (int i = 0; i < 4; ++i) out.push_back(opcross::random_subspace<double>(2 * k, k, rng));
  return out;
}

/// k-dimensional P = span(e_1..e_k) and Q = span(cos t_i e_i + sin t_i e_{k+i})
/// in R^n (n >= 2k), so the principal angles between them are exactly t_i.
inline std::pair<MatrixXd, MatrixXd> pair_with_angles(Eigen::Index n, const std::vector<double>& angles) {
  const auto k = static_cast<Eigen::Index>(angles.size());
  MatrixXd p = MatrixXd::Zero(n, k), q = MatrixXd::Zero(n, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    p(i, i) = 1;
    q(i, i) = std::cos(angles[i]);
    q(k + i, i) = std::sin(angles[i]);
  }
  return {p, q};
}

/// Angles drawn uniformly in [0.1, 1.4].
inline std::vector<double> random_angles(Eigen::Index k, Rng& rng) {
  std::vector<double> a;
  for (Eigen::Index i = 0; i < k; ++i) a.push_back(opcross::uniform(rng, 0.1, 1.4));
  return a;
}

}  // namespace fixture

#endif  // OPCROSS_TESTS_FIXTURES_HPP
