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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "opcross/error.hpp"
#include "opcross/numerics.hpp"
#include "opcross/random.hpp"
#include "oracles.hpp"

namespace opcross {
namespace {

using Eigen::MatrixXd;
using Eigen::MatrixXcd;

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no opcross::Error thrown";
  return ErrorKind::Validation;
}

TEST(Error, KindsAndMessages) {
  EXPECT_EQ(to_string(ErrorKind::BlowUp), "BlowUp");
  EXPECT_EQ(to_string(ErrorKind::NotPolarization), "NotPolarization");
  EXPECT_TRUE(is_input_error(ErrorKind::Validation));
  EXPECT_TRUE(is_input_error(ErrorKind::DimensionMismatch));
  EXPECT_FALSE(is_input_error(ErrorKind::Singular));
  const Error e(ErrorKind::Singular, "pivot");
  EXPECT_EQ(e.kind(), ErrorKind::Singular);
  EXPECT_NE(std::string(e.what()).find("pivot"), std::string::npos);
}

TEST(SingularValues, DescendingAndMatchSymmetricEigen) {
  Rng rng = make_rng(1);
  const MatrixXd a = gaussian_matrix<double>(5, 3, rng);
  const auto s = singular_values(a);
  ASSERT_EQ(s.size(), 3);
  for (Eigen::Index i = 1; i < s.size(); ++i) EXPECT_GE(s(i - 1), s(i));
  auto ev = oracle::real_eigenvalues(a.transpose() * a);
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(s(i) * s(i), ev[2 - i], 1e-10);
}

TEST(InverseCondition, ZeroAndIdentity) {
  EXPECT_EQ(inverse_condition(MatrixXd::Zero(3, 3)), 0.0);
  EXPECT_NEAR(inverse_condition(MatrixXd::Identity(3, 3)), 1.0, 1e-15);
  Rng rng = make_rng(2);
  EXPECT_NEAR(inverse_condition(random_conditioned<double>(6, 1e4, rng)), 1e-4, 1e-10);
}

TEST(Solve, RoundTripOnConditionedSystems) {
  Rng rng = make_rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const MatrixXd a = random_conditioned<double>(6, 1e4, rng);
    const MatrixXd x = gaussian_matrix<double>(6, 3, rng);
    EXPECT_LT((solve(a, (a * x).eval()) - x).norm(), 1e-9);
    EXPECT_LT((solve_right((x.transpose() * a).eval(), a) - x.transpose()).norm(), 1e-9);
  }
}

TEST(Solve, Errors) {
  MatrixXd singular(2, 2);
  singular << 1, 2, 2, 4;
  EXPECT_EQ(kind_of([&] { solve(singular, MatrixXd::Identity(2, 2)); }), ErrorKind::Singular);
  EXPECT_EQ(kind_of([&] { solve(MatrixXd::Identity(2, 2), MatrixXd::Identity(3, 1)); }),
            ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([&] { solve(MatrixXd::Identity(2, 3), MatrixXd::Identity(2, 1)); }),
            ErrorKind::DimensionMismatch);
  MatrixXd bad = MatrixXd::Identity(2, 2);
  bad(0, 1) = NAN;
  EXPECT_EQ(kind_of([&] { solve(bad, MatrixXd::Identity(2, 2)); }), ErrorKind::Validation);
}

TEST(Solve, ComplexScalars) {
  Rng rng = make_rng(4);
  const MatrixXcd a = gaussian_matrix<std::complex<double>>(4, 4, rng);
  const MatrixXcd x = gaussian_matrix<std::complex<double>>(4, 2, rng);
  EXPECT_LT((solve(a, (a * x).eval()) - x).norm(), 1e-10);
}

TEST(Expm, MatchesTaylorOracle) {
  Rng rng = make_rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixXd m = gaussian_matrix<double>(5, 5, rng) * (0.5 + trial * 0.3);
    const MatrixXd ref = oracle::expm_series(m);
    EXPECT_LT((expm(m) - ref).norm(), 1e-10 * std::max(1.0, ref.norm()));
  }
}

TEST(Expm, NilpotentIsFinitePolynomial) {
  MatrixXd n = MatrixXd::Zero(4, 4);
  for (int i = 1; i < 4; ++i) n(i, i - 1) = 1;
  const MatrixXd expected = MatrixXd::Identity(4, 4) + n + n * n / 2 + n * n * n / 6;
  EXPECT_LT((expm(n) - expected).norm(), 1e-14);
}

TEST(Expm, RotationGenerator) {
  MatrixXd j(2, 2);
  j << 0, -1, 1, 0;
  const double t = 0.7;
  MatrixXd r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  EXPECT_LT((expm((t * j).eval()) - r).norm(), 1e-14);
}

TEST(Eigenvalues, SortedWithConjugatePairs) {
  MatrixXd m(3, 3);
  m << 0, -2, 0, 2, 0, 0, 0, 0, -1;
  const auto s = eigenvalues(m);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_NEAR(s[0].real(), -1, 1e-14);
  EXPECT_NEAR(s[1].real(), 0, 1e-14);
  EXPECT_NEAR(s[1].imag(), -2, 1e-14);
  EXPECT_NEAR(s[2].imag(), 2, 1e-14);
}

TEST(SpectralDistance, BottleneckMatching) {
  using C = std::complex<double>;
  const Spectrum<double> a = {C(0, 0), C(1, 0)};
  const Spectrum<double> b = {C(1, 0), C(0.1, 0)};
  EXPECT_NEAR(spectral_distance(a, b), 0.1, 1e-15);
  // Greedy nearest matching would pair 0.45 with 0.5 and leave 0 <-> 1.
  const Spectrum<double> c = {C(0, 0), C(0.5, 0)};
  const Spectrum<double> d = {C(0.45, 0), C(0.95, 0)};
  EXPECT_NEAR(spectral_distance(c, d), 0.45, 1e-15);
  EXPECT_TRUE(std::isinf(spectral_distance(a, Spectrum<double>{C(0, 0)})));
  EXPECT_EQ(spectral_distance(Spectrum<double>{}, Spectrum<double>{}), 0.0);
}

TEST(SpectralDistance, InvariantUnderSimilarity) {
  Rng rng = make_rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixXd m = gaussian_matrix<double>(6, 6, rng);
    const MatrixXd g = random_conditioned<double>(6, 1e2, rng);
    const MatrixXd similar = g * m * inverse(g);
    EXPECT_LT(spectral_distance(eigenvalues(m), eigenvalues(similar)), 1e-9);
  }
}

TEST(TracePowers, MatchEigenvalueSums) {
  Rng rng = make_rng(7);
  const MatrixXd m = gaussian_matrix<double>(4, 4, rng);
  const auto tr = trace_powers(m, 5);
  const auto ev = oracle::eig(m);
  for (int k = 1; k <= 5; ++k) {
    std::complex<double> s = 0;
    for (const auto& z : ev) s += std::pow(z, k);
    EXPECT_NEAR(tr[k - 1], s.real(), 1e-10 * std::max(1.0, std::abs(s)));
  }
}

TEST(Projector, IdempotentSymmetric) {
  Rng rng = make_rng(8);
  const MatrixXd q = oracle::gram_schmidt(gaussian_matrix<double>(5, 2, rng));
  const MatrixXd p = projector(q);
  EXPECT_LT((p * p - p).norm(), 1e-14);
  EXPECT_LT((p - p.transpose()).norm(), 1e-15);
  EXPECT_NEAR(p.trace(), 2, 1e-14);
}

TEST(NullSpace, ExpectedNullity) {
  MatrixXd m(2, 3);
  m << 1, 0, 0, 0, 1, 0;
  const MatrixXd k = null_space(m, 1, tol::kRank);
  ASSERT_EQ(k.cols(), 1);
  EXPECT_NEAR(std::abs(k(2, 0)), 1, 1e-14);
  EXPECT_EQ(kind_of([&] { null_space(m, 2, tol::kRank); }), ErrorKind::DegeneratePosition);
}

TEST(Random, DeterministicPerSeed) {
  Rng a = make_rng(42), b = make_rng(42), c = make_rng(43);
  const MatrixXd x = gaussian_matrix<double>(3, 3, a);
  EXPECT_EQ(x, gaussian_matrix<double>(3, 3, b));
  EXPECT_NE(x, gaussian_matrix<double>(3, 3, c));
  Rng d = make_rng(9);
  const MatrixXd o = random_orthogonal<double>(5, d);
  EXPECT_LT((o.transpose() * o - MatrixXd::Identity(5, 5)).norm(), 1e-13);
}

}  // namespace
}  // namespace opcross
