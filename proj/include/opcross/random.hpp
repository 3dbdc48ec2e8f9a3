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

#ifndef OPCROSS_RANDOM_HPP
#define OPCROSS_RANDOM_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "opcross/numerics.hpp"

namespace opcross {

/// Seeded generator passed explicitly to every randomized constructor.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

template <typename Scalar>
Scalar gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
    const double re = normal(rng);
    const double im = normal(rng);
    return Scalar(re, im) / std::sqrt(2.0);
  } else {
    return static_cast<Scalar>(normal(rng));
  }
}

template <typename Scalar>
Mat<Scalar> gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Mat<Scalar> m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = gaussian<Scalar>(rng);
  return m;
}

/// Haar-distributed orthogonal (unitary) matrix: QR of a Gaussian matrix with
/// the phases of R's diagonal absorbed into Q.
template <typename Scalar>
Mat<Scalar> random_orthogonal(Eigen::Index n, Rng& rng) {
  const Mat<Scalar> g = gaussian_matrix<Scalar>(n, n, rng);
  Eigen::HouseholderQR<Mat<Scalar>> qr(g);
  Mat<Scalar> q = qr.householderQ() * Mat<Scalar>::Identity(n, n);
  const Mat<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

/// Random square matrix with 2-norm condition number exactly `condition`
/// (singular values log-spaced between 1 and 1/condition).
template <typename Scalar>
Mat<Scalar> random_conditioned(Eigen::Index n, double condition, Rng& rng) {
  const Mat<Scalar> u = random_orthogonal<Scalar>(n, rng);
  const Mat<Scalar> v = random_orthogonal<Scalar>(n, rng);
  Vec<Scalar> sigma(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double frac = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    sigma(i) = static_cast<Scalar>(std::pow(condition, -frac));
  }
  return u * sigma.asDiagonal() * v.adjoint();
}

inline double uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng);
}

}  // namespace opcross

#endif  // OPCROSS_RANDOM_HPP
