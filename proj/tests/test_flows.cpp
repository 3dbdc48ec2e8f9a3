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
#include <vector>

#include "opcross/crossratio.hpp"
#include "opcross/error.hpp"
#include "opcross/flows.hpp"
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

std::vector<double> unit_grid(int count = 11) {
  std::vector<double> t;
  for (int i = 0; i < count; ++i) t.push_back(static_cast<double>(i) / (count - 1));
  return t;
}

std::vector<Subspace<double>> truncation_initials(Eigen::Index n, Rng& rng) {
  const Eigen::Index k = (n + 1) / 2;
  std::vector<Subspace<double>> w;
  for (int i = 0; i < 4; ++i) w.push_back(random_subspace<double>(n, i % 2 == 0 ? k : n - k, rng));
  return w;
}

TEST(ShiftGenerator, StructureAndNilpotency) {
  const MatrixXd s = shift_generator(5, 2);
  EXPECT_EQ(s(2, 0), 1);
  EXPECT_EQ(s(4, 2), 1);
  EXPECT_EQ(s.sum(), 3);
  EXPECT_EQ((s * s * s).norm(), 0);
  EXPECT_EQ(kind_of([] { shift_generator(3, 3); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { shift_generator(3, 0); }), ErrorKind::Validation);
}

TEST(TruncationPolarization, Halves) {
  EXPECT_EQ(truncation_polarization(7).horizontal().dim(), 4);
  EXPECT_EQ(truncation_polarization(8).vertical().dim(), 4);
}

TEST(FlowSubspace, MatchesExponentialOracle) {
  Rng rng = make_rng(51);
  const MatrixXd m = gaussian_matrix<double>(5, 5, rng);
  const auto w0 = random_subspace<double>(5, 2, rng);
  const auto w = flow_subspace(m, 0.7, w0);
  const MatrixXd moved = oracle::expm_series(0.7 * m) * w0.basis();
  EXPECT_TRUE(same_subspace(w, Subspace<double>::span(moved)));
}

TEST(ConstantRiccati, IsChartVelocityOfFlow) {
  Rng rng = make_rng(52);
  const MatrixXd m = gaussian_matrix<double>(5, 5, rng);
  const auto pol = Polarization<double>::standard(5, 2);
  const MatrixXd t0 = 0.3 * gaussian_matrix<double>(3, 2, rng);
  const auto w0 = subspace_from_graph(t0, pol);
  const double h = 1e-4;
  const MatrixXd fd = (graph_coordinate(flow_subspace(m, h, w0), pol) - graph_coordinate(flow_subspace(m, -h, w0), pol)) /
                      (2 * h);
  EXPECT_LT((constant_riccati_rhs(m, t0) - fd).norm(), 1e-6);
}

TEST(Scenario, Validation) {
  Rng rng = make_rng(53);
  auto w = truncation_initials(4, rng);
  EXPECT_EQ(kind_of([&] { FlowScenario::make(shift_generator(4, 1), w, {0, 0.5, 0.5}); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([&] { FlowScenario::make(shift_generator(4, 1), w, {}); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([&] { FlowScenario::make(shift_generator(5, 1), w, {0, 1}); }), ErrorKind::DimensionMismatch);
  w.pop_back();
  const auto sc = FlowScenario::make(shift_generator(4, 1), w, {0, 1});
  EXPECT_EQ(kind_of([&] { spectrum_along_flow(sc); }), ErrorKind::Validation);
}

TEST(Conservation, ShiftPowersAllTruncations) {
  Rng rng = make_rng(54);
  for (Eigen::Index n = 2; n <= 12; ++n) {
    for (Eigen::Index power = 1; power < n; ++power) {
      const auto sc = FlowScenario::make(shift_generator(n, power), truncation_initials(n, rng), unit_grid());
      const auto samples = spectrum_along_flow(sc);
      EXPECT_LE(max_spectral_drift(samples), 1e-6) << n << " " << power;
      EXPECT_LE(max_trace_drift(samples), 1e-6) << n << " " << power;
    }
  }
}

TEST(Conservation, GeneralGenerator) {
  Rng rng = make_rng(55);
  const auto sc = FlowScenario::make(gaussian_matrix<double>(6, 6, rng), truncation_initials(6, rng), unit_grid());
  const auto samples = spectrum_along_flow(sc, FlowVariant::AllFlowed, 8);
  EXPECT_EQ(samples.front().traces.size(), 8u);
  EXPECT_LE(max_spectral_drift(samples), 1e-6);
}

TEST(FirstFixed, ConservedOnlyForStationaryHeldSubspace) {
  Rng rng = make_rng(56);
  MatrixXd m = gaussian_matrix<double>(4, 4, rng);
  m.bottomLeftCorner(2, 2).setZero();  // span(e1, e2) is invariant
  auto w = truncation_initials(4, rng);
  w[0] = Subspace<double>::span(MatrixXd::Identity(4, 2));
  ASSERT_TRUE(is_stationary(m, w[0]));
  const auto held = spectrum_along_flow(FlowScenario::make(m, w, unit_grid()), FlowVariant::FirstFixed);
  EXPECT_LE(max_spectral_drift(held), 1e-6);

  w[0] = random_subspace<double>(4, 2, rng);
  ASSERT_FALSE(is_stationary(m, w[0]));
  const auto moving = spectrum_along_flow(FlowScenario::make(m, w, unit_grid()), FlowVariant::FirstFixed);
  EXPECT_GT(max_spectral_drift(moving), 1e-3);
}

TEST(Flow, NonAdmissibleTimeReported) {
  // Rotation by a quarter turn carries span(e1) onto span(e2) = P2.
  MatrixXd j(2, 2);
  j << 0, -1, 1, 0;
  const auto e1 = Subspace<double>::span(MatrixXd::Identity(2, 1));
  MatrixXd e2v(2, 1);
  e2v << 0, 1;
  const auto e2 = Subspace<double>::span(e2v);
  MatrixXd d(2, 1);
  d << 1, 1;
  MatrixXd a(2, 1);
  a << 1, -2;
  const auto sc = FlowScenario::make(j, {e1, e2, Subspace<double>::span(d), Subspace<double>::span(a)},
                                     {0.0, std::acos(-1.0) / 2});
  try {
    spectrum_along_flow(sc, FlowVariant::FirstFixed);
    FAIL() << "expected NotPolarization";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPolarization);
    EXPECT_NE(std::string(e.what()).find("t = 1.57"), std::string::npos) << e.what();
  }
}

TEST(Stationary, DiagonalGenerator) {
  const MatrixXd m = Eigen::Vector4d(1, 2, 3, 4).asDiagonal();
  const auto subs = stationary_subspaces(m, 2);
  EXPECT_EQ(subs.size(), 6u);
  for (const auto& w : subs) EXPECT_TRUE(is_stationary(m, w));
  for (std::size_t i = 0; i < subs.size(); ++i)
    for (std::size_t j = i + 1; j < subs.size(); ++j) EXPECT_FALSE(same_subspace(subs[i], subs[j]));
}

TEST(Stationary, JordanBlockHasUniqueFlag) {
  const MatrixXd m = shift_generator(4, 1);
  for (Eigen::Index k = 1; k < 4; ++k) {
    const auto subs = stationary_subspaces(m, k);
    ASSERT_EQ(subs.size(), 1u) << k;
    EXPECT_TRUE(is_stationary(m, subs[0]));
    // The kernel of N^k is spanned by the last k basis vectors.
    EXPECT_TRUE(same_subspace(subs[0], Subspace<double>::span(MatrixXd::Identity(4, 4).rightCols(k))));
  }
}

TEST(Stationary, ComplexPairKeptTogether) {
  MatrixXd m = MatrixXd::Zero(3, 3);
  m(0, 1) = -1;
  m(1, 0) = 1;
  m(2, 2) = 5;
  EXPECT_EQ(stationary_subspaces(m, 2).size(), 1u);
  EXPECT_EQ(stationary_subspaces(m, 1).size(), 1u);
  EXPECT_TRUE(is_stationary(m, stationary_subspaces(m, 2)[0]));
}

TEST(Stationary, DefectiveClustersRejected) {
  // Two Jordan chains for the eigenvalue 0: the kernel is a plane and no
  // line in it is distinguished.
  MatrixXd m = MatrixXd::Zero(4, 4);
  m(1, 0) = 1;
  m(3, 2) = 1;
  EXPECT_EQ(kind_of([&] { stationary_subspaces(m, 1); }), ErrorKind::DefectiveSpectrum);
}

TEST(Stationary, FixedPointOfRiccatiFlow) {
  const MatrixXd m = MatrixXd(Eigen::Vector4d(-1, 2, 0.5, 3).asDiagonal());
  MatrixXd g = MatrixXd::Identity(4, 4);
  g(0, 2) = 0.3;
  g(3, 1) = -0.2;
  const MatrixXd mm = g * m * inverse(g);
  const auto pol = Polarization<double>::standard(4, 2);
  for (const auto& w : stationary_subspaces(mm, 2)) {
    try {
      EXPECT_LT(constant_riccati_rhs(mm, graph_coordinate(w, pol)).norm(), 1e-9);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::OutsideChart);
    }
  }
}

TEST(CommutingFlows, ResidualVanishes) {
  Rng rng = make_rng(57);
  const MatrixXd a = gaussian_matrix<double>(5, 5, rng);
  const MatrixXd b = a * a - 2 * a;  // polynomial in a, so [a, b] = 0
  const auto w0 = random_subspace<double>(5, 2, rng);
  EXPECT_LE(commuting_flow_residual(a, b, w0, 0.4, 0.3), 1e-8);
  EXPECT_LE(commuting_flow_residual(shift_generator(6, 1), shift_generator(6, 2), random_subspace<double>(6, 3, rng),
                                    1.0, 1.0),
            1e-8);
  const MatrixXd c = gaussian_matrix<double>(5, 5, rng);
  EXPECT_GT(commuting_flow_residual(a, c, w0, 0.4, 0.3), 1e-4);
}

TEST(TraceInvariants, MatchOracle) {
  Rng rng = make_rng(58);
  const MatrixXd d = gaussian_matrix<double>(4, 4, rng);
  const auto inv = trace_invariants(d);
  ASSERT_EQ(inv.traces.size(), 4u);
  EXPECT_NEAR(inv.traces[1], (d * d).trace(), 1e-12);
  EXPECT_NEAR(inv.determinant, d.determinant(), 1e-12);
}

TEST(AlmostNilpotent, Validation) {
  MatrixXd m = MatrixXd::Zero(4, 4);
  m.topLeftCorner(2, 2) << 1, 2, 3, 4;
  m(1, 3) = 5;
  m(2, 3) = 7;
  const auto a = AlmostNilpotent::make(m, 2);
  EXPECT_EQ(a.block_size(), 2);
  EXPECT_EQ(a.block()(1, 0), 3);
  // Traces of powers only see the leading block.
  EXPECT_NEAR(trace_invariants(a.matrix(), 3).traces[1], (a.block() * a.block()).trace(), 1e-12);
  m(3, 3) = 1;
  EXPECT_EQ(kind_of([&] { AlmostNilpotent::make(m, 2); }), ErrorKind::Validation);
  m(3, 3) = 0;
  m(3, 0) = 1;
  EXPECT_EQ(kind_of([&] { AlmostNilpotent::make(m, 2); }), ErrorKind::Validation);
}

}  // namespace
}  // namespace opcross
