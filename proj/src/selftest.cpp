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

#include "opcross/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "opcross/crossratio.hpp"
#include "opcross/flows.hpp"
#include "opcross/grassmann.hpp"
#include "opcross/numerics.hpp"
#include "opcross/random.hpp"
#include "opcross/schwarz.hpp"

namespace opcross {

namespace {

using Eigen::MatrixXd;

struct Battery {
  Rng rng;
  std::vector<SelfTestCheck> checks;

  // Runs `trials` draws of `one` and records the worst value.
  void check(std::string name, double threshold, int trials, const std::function<double(Rng&)>& one) {
    double worst = 0;
    for (int i = 0; i < trials; ++i) worst = std::max(worst, one(rng));
    checks.push_back({std::move(name), worst, threshold, worst <= threshold});
  }
};

}  // namespace

std::vector<SelfTestCheck> run_selftest(std::uint64_t seed) {
  Battery b{make_rng(seed), {}};

  b.check("numerics.expm_inverse", 1e-10, 5, [](Rng& rng) {
    const MatrixXd m = gaussian_matrix<double>(5, 5, rng);
    return (expm(m) * expm((-m).eval()) - MatrixXd::Identity(5, 5)).norm();
  });

  b.check("numerics.solve_residual", 1e-9, 5, [](Rng& rng) {
    const MatrixXd a = random_conditioned<double>(6, 1e3, rng);
    const MatrixXd x = gaussian_matrix<double>(6, 2, rng);
    return (solve(a, (a * x).eval()) - x).norm();
  });

  b.check("grassmann.graph_roundtrip", 1e-9, 10, [](Rng& rng) {
    const auto pol = Polarization<double>::standard(6, 3);
    const MatrixXd t = gaussian_matrix<double>(3, 3, rng);
    return (graph_coordinate(subspace_from_graph(t, pol), pol) - t).norm();
  });

  b.check("grassmann.projector_idempotent", 1e-9, 10, [](Rng& rng) {
    const auto u = random_subspace<double>(5, 2, rng);
    const auto v = random_subspace<double>(5, 3, rng);
    const MatrixXd p = parallel_projector(u, v);
    return (p * p - p).norm();
  });

  b.check("crossratio.presentations", 1e-8, 20, [](Rng& rng) {
    const auto pol = Polarization<double>::standard(4, 2);
    std::vector<Subspace<double>> w;
    for (int i = 0; i < 4; ++i) w.push_back(random_subspace<double>(4, 2, rng));
    std::array<MatrixXd, 4> t;
    for (int i = 0; i < 4; ++i) t[i] = graph_coordinate(w[i], pol);
    const auto direct = dv_composition(w[0], w[1], w[2], w[3]);
    const auto chart = dv_matrix(t[0], t[1], t[2], t[3], pol);
    const auto sw = pol.swapped();
    const auto mixed =
        dv_mixed(t[0], graph_coordinate(w[1], sw), t[2], graph_coordinate(w[3], sw));
    return std::max(spectral_distance(direct.spectrum, chart.spectrum),
                    spectral_distance(direct.spectrum, mixed.spectrum));
  });

  b.check("crossratio.mobius_invariance", 1e-7, 10, [](Rng& rng) {
    std::vector<Subspace<double>> w;
    for (int i = 0; i < 4; ++i) w.push_back(random_subspace<double>(4, 2, rng));
    const MatrixXd g = random_conditioned<double>(4, 1e2, rng);
    const auto before = dv_composition(w[0], w[1], w[2], w[3]);
    const auto after = dv_composition(transform(g, w[0]), transform(g, w[1]), transform(g, w[2]), transform(g, w[3]));
    return spectral_distance(before.spectrum, after.spectrum);
  });

  b.check("crossratio.cocycle", 1e-8, 10, [](Rng& rng) {
    const auto p1 = random_subspace<double>(6, 3, rng), p2 = random_subspace<double>(6, 3, rng);
    const auto q1 = random_subspace<double>(6, 3, rng), q2 = random_subspace<double>(6, 3, rng),
               q3 = random_subspace<double>(6, 3, rng);
    return (cocycle_product(p1, p2, q1, q2, q3) - MatrixXd::Identity(3, 3)).norm();
  });

  b.check("crossratio.operator_angle", 1e-8, 10, [](Rng& rng) {
    const auto pol = Polarization<double>::standard(5, 2);
    const MatrixXd a = gaussian_matrix<double>(3, 2, rng), c = gaussian_matrix<double>(3, 2, rng);
    const auto th = principal_angles(subspace_from_graph(a, pol), subspace_from_graph(c, pol));
    Spectrum<double> cos2;
    for (Eigen::Index i = 0; i < th.size(); ++i) cos2.emplace_back(std::cos(th(i)) * std::cos(th(i)), 0.0);
    sort_spectrum(cos2);
    return spectral_distance(operator_angle(a, c).spectrum, cos2);
  });

  b.check("schwarz.tan_exact", 1e-10, 5, [](Rng& rng) {
    const double t = uniform(rng, -1.0, 1.0), z = std::tan(t), z1 = 1 + z * z, z2 = 2 * z * z1;
    CurveJet jet{t, MatrixXd::Constant(1, 1, z), MatrixXd::Constant(1, 1, z1), MatrixXd::Constant(1, 1, z2),
                 MatrixXd::Constant(1, 1, 2 * z1 * z1 + 2 * z * z2)};
    return std::abs(schwarz(jet)(0, 0) - 2.0);
  });

  b.check("schwarz.mobius_isospectral", 1e-7, 5, [](Rng& rng) {
    const Eigen::Index k = 3;
    std::vector<MatrixXd> c;
    for (int i = 0; i < 4; ++i) c.push_back(gaussian_matrix<double>(k, k, rng));
    c[1] += 3 * MatrixXd::Identity(k, k);
    const MatrixPolynomial z(k, k, c);
    const MatrixPolynomial d1 = z.derivative(), d2 = d1.derivative(), d3 = d2.derivative();
    const double t = 0.1;
    const CurveJet jet{t, z(t), d1(t), d2(t), d3(t)};
    MobiusBlocks m{gaussian_matrix<double>(k, k, rng), gaussian_matrix<double>(k, k, rng),
                   0.2 * gaussian_matrix<double>(k, k, rng), gaussian_matrix<double>(k, k, rng)};
    m.c4 += 4 * MatrixXd::Identity(k, k);
    return spectral_distance(eigenvalues(schwarz(jet)), eigenvalues(schwarz(mobius_curve_jet(m, jet))));
  });

  b.check("schwarz.riccati_vs_hamiltonian", 1e-6, 3, [](Rng& rng) {
    const Eigen::Index n = 2;
    MatrixXd bm = gaussian_matrix<double>(n, n, rng);
    bm = (0.25 * (bm + bm.transpose())).eval();
    const MatrixXd am = 0.3 * gaussian_matrix<double>(n, n, rng);
    const auto sys = HamiltonianSystem::make(n, {am}, {bm}, false);
    MatrixXd w0 = gaussian_matrix<double>(n, n, rng);
    w0 = (0.25 * (w0 + w0.transpose())).eval();
    const auto ric = integrate_riccati(sys, w0, 0.0, 0.5, 400);
    const auto ham = integrate_hamiltonian(sys, {MatrixXd::Identity(n, n), w0}, 0.0, 0.5, 400);
    const PhasePoint& x = ham.states.back();
    return (solve_right(x.p, x.q) - ric.values.back()).norm();
  });

  b.check("flows.conservation", 1e-6, 3, [](Rng& rng) {
    const Eigen::Index n = 6;
    const MatrixXd m = shift_generator(n, 1);
    std::vector<Subspace<double>> w;
    for (int i = 0; i < 4; ++i) w.push_back(random_subspace<double>(n, n / 2, rng));
    std::vector<double> times;
    for (int i = 0; i <= 10; ++i) times.push_back(0.1 * i);
    const auto samples = spectrum_along_flow(FlowScenario::make(m, w, times));
    return std::max(max_spectral_drift(samples), max_trace_drift(samples));
  });

  return b.checks;
}

}  // namespace opcross
