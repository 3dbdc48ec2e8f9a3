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
#include "opcross/grassmann.hpp"
#include "opcross/random.hpp"
#include "oracles.hpp"

namespace opcross {
namespace {

using Eigen::MatrixXd;

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

TEST(Subspace, SpanValidation) {
  EXPECT_EQ(kind_of([] { Subspace<double>::span(MatrixXd::Identity(3, 3)); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([] { Subspace<double>::span(MatrixXd::Zero(3, 0)); }), ErrorKind::DimensionMismatch);
  MatrixXd dup(3, 2);
  dup << 1, 2, 1, 2, 1, 2;
  EXPECT_EQ(kind_of([&] { Subspace<double>::span(dup); }), ErrorKind::RankDeficient);
  MatrixXd nan = MatrixXd::Identity(3, 1);
  nan(1, 0) = NAN;
  EXPECT_EQ(kind_of([&] { Subspace<double>::span(nan); }), ErrorKind::Validation);
}

TEST(Subspace, OrthonormalBasisIndependentOfSpanningSet) {
  Rng rng = make_rng(11);
  const MatrixXd cols = gaussian_matrix<double>(6, 3, rng);
  const auto w = Subspace<double>::span(cols);
  EXPECT_EQ(w.ambient_dim(), 6);
  EXPECT_EQ(w.dim(), 3);
  EXPECT_LT((w.basis().transpose() * w.basis() - MatrixXd::Identity(3, 3)).norm(), 1e-14);
  EXPECT_LT((w.basis() - oracle::gram_schmidt(cols)).norm(), 1e-12);
  const MatrixXd mixed = cols * random_conditioned<double>(3, 10, rng);
  EXPECT_TRUE(same_subspace(w, Subspace<double>::span(mixed)));
  EXPECT_FALSE(same_subspace(w, random_subspace<double>(6, 3, rng)));
}

TEST(Subspace, OrthogonalComplementAndMargin) {
  Rng rng = make_rng(12);
  const auto w = random_subspace<double>(5, 2, rng);
  const auto c = orthogonal_complement(w);
  EXPECT_EQ(c.dim(), 3);
  EXPECT_LT((w.basis().transpose() * c.basis()).norm(), 1e-14);
  EXPECT_NEAR(direct_sum_margin(w, c), 1.0, 1e-12);
  EXPECT_TRUE(complementary(w, c));
  EXPECT_FALSE(complementary(w, w));
}

TEST(Polarization, Validation) {
  const auto h = Subspace<double>::span(MatrixXd::Identity(4, 2));
  EXPECT_EQ(kind_of([&] { Polarization<double>::make(h, h); }), ErrorKind::NotPolarization);
  const auto pol = Polarization<double>::standard(4, 2);
  EXPECT_LT((pol.frame() - MatrixXd::Identity(4, 4)).norm(), 1e-15);
  EXPECT_TRUE(same_subspace(pol.swapped().horizontal(), pol.vertical()));
}

TEST(ParallelProjector, MatchesOracleAndIsOblique) {
  Rng rng = make_rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = random_subspace<double>(5, 2, rng), v = random_subspace<double>(5, 3, rng);
    const MatrixXd p = parallel_projector(u, v);
    EXPECT_LT((p - oracle::oblique_projector(u.basis(), v.basis())).norm(), 1e-9 * std::max(1.0, p.norm()));
    EXPECT_LT((p * p - p).norm(), 1e-9 * p.squaredNorm());
    EXPECT_LT((p * u.basis() - u.basis()).norm(), 1e-10 * p.norm());
    EXPECT_LT((p * v.basis()).norm(), 1e-10 * p.norm());
    const Eigen::VectorXd x = gaussian_matrix<double>(5, 1, rng);
    EXPECT_LT((project_parallel(x, u, v) - p * x).norm(), 1e-10 * p.norm() * x.norm());
  }
}

TEST(ParallelProjector, RejectsNonComplementaryPairs) {
  const auto u = Subspace<double>::span(MatrixXd::Identity(3, 1));
  const auto v = Subspace<double>::span(MatrixXd::Identity(3, 2));
  EXPECT_EQ(kind_of([&] { parallel_projector(u, v); }), ErrorKind::NotComplementary);
  const auto w = Subspace<double>::span(MatrixXd::Identity(3, 1));
  EXPECT_EQ(kind_of([&] { parallel_projector(u, w); }), ErrorKind::NotComplementary);
}

TEST(GraphChart, RoundTripAndOutsideChart) {
  Rng rng = make_rng(14);
  const auto pol = Polarization<double>::standard(5, 2);
  const MatrixXd t = gaussian_matrix<double>(3, 2, rng);
  const auto w = subspace_from_graph(t, pol);
  EXPECT_LT((graph_coordinate(w, pol) - t).norm(), 1e-12);
  // The vertical summand itself never projects onto the horizontal one.
  const auto vert = Subspace<double>::span(pol.vertical().basis().leftCols(2));
  EXPECT_EQ(kind_of([&] { graph_coordinate(vert, pol); }), ErrorKind::OutsideChart);
}

TEST(GraphChart, NonOrthogonalPolarization) {
  Rng rng = make_rng(15);
  const auto h = random_subspace<double>(4, 2, rng), v = random_subspace<double>(4, 2, rng);
  const auto pol = Polarization<double>::make(h, v);
  const MatrixXd t = gaussian_matrix<double>(2, 2, rng);
  const auto w = subspace_from_graph(t, pol);
  // w is spanned by h_i + sum_j t_ji v_j.
  const MatrixXd expected = h.basis() + v.basis() * t;
  EXPECT_TRUE(same_subspace(w, Subspace<double>::span(expected)));
  EXPECT_LT((graph_coordinate(w, pol) - t).norm(), 1e-10);
}

TEST(BlockMobius, CoordinateActionMatchesAmbientAction) {
  Rng rng = make_rng(16);
  const auto pol = Polarization<double>::standard(4, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = BlockMobius<double>::from_matrix(random_conditioned<double>(4, 1e2, rng), 2);
    const MatrixXd t = gaussian_matrix<double>(2, 2, rng);
    const auto moved = transform(g.ambient(pol), subspace_from_graph(t, pol));
    EXPECT_LT((mobius_apply_coordinate(g, t) - graph_coordinate(moved, pol)).norm(),
              1e-8 * std::max(1.0, graph_coordinate(moved, pol).norm()));
    EXPECT_TRUE(same_subspace(mobius_apply_subspace(g, subspace_from_graph(t, pol), pol), moved, 1e-8));
  }
}

TEST(BlockMobius, CompositionIsActionComposition) {
  Rng rng = make_rng(17);
  const auto g1 = BlockMobius<double>::from_matrix(random_conditioned<double>(4, 10, rng), 2);
  const auto g2 = BlockMobius<double>::from_matrix(random_conditioned<double>(4, 10, rng), 2);
  const MatrixXd t = gaussian_matrix<double>(2, 2, rng);
  const MatrixXd seq = mobius_apply_coordinate(g1, mobius_apply_coordinate(g2, t));
  EXPECT_LT((mobius_apply_coordinate(compose(g1, g2), t) - seq).norm(), 1e-9 * std::max(1.0, seq.norm()));
  const auto id = BlockMobius<double>::identity(4, 2);
  EXPECT_LT((mobius_apply_coordinate(id, t) - t).norm(), 1e-15);
}

TEST(BlockMobius, SingularRejected) {
  MatrixXd g = MatrixXd::Identity(4, 4);
  g(3, 3) = 0;
  EXPECT_EQ(kind_of([&] { BlockMobius<double>::from_matrix(g, 2); }), ErrorKind::Singular);
}

TEST(PrincipalAngles, MatchCosineOracle) {
  Rng rng = make_rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_subspace<double>(7, 3, rng), b = random_subspace<double>(7, 2, rng);
    const auto th = principal_angles(a, b);
    ASSERT_EQ(th.size(), 2);
    EXPECT_LE(th(0), th(1));
    auto c2 = oracle::cos2_principal(b.basis(), a.basis());
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(std::cos(th(i)) * std::cos(th(i)), c2[1 - i], 1e-12);
  }
}

TEST(PrincipalAngles, SmallAnglesResolved) {
  const double eps = 1e-9;
  MatrixXd a = MatrixXd::Zero(3, 1), b = MatrixXd::Zero(3, 1);
  a(0, 0) = 1;
  b(0, 0) = std::cos(eps);
  b(1, 0) = std::sin(eps);
  const auto th = principal_angles(Subspace<double>::span(a), Subspace<double>::span(b));
  EXPECT_NEAR(th(0), eps, 1e-20);
}

TEST(Grassmann, ComplexSubspaces) {
  Rng rng = make_rng(19);
  using C = std::complex<double>;
  const auto w = random_subspace<C>(4, 2, rng);
  EXPECT_LT((w.basis().adjoint() * w.basis() - Eigen::MatrixXcd::Identity(2, 2)).norm(), 1e-14);
  const auto v = random_subspace<C>(4, 2, rng);
  const Eigen::MatrixXcd p = parallel_projector(w, v);
  EXPECT_LT((p * p - p).norm(), 1e-9 * p.squaredNorm());
}

}  // namespace
}  // namespace opcross
