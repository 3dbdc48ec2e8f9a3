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

#include "opcross/flows.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "opcross/error.hpp"
#include "opcross/numerics.hpp"

namespace opcross {

using Eigen::MatrixXd;

MatrixXd shift_generator(Eigen::Index n, Eigen::Index power) {
  require(power >= 1 && power < n, ErrorKind::Validation, "shift power must satisfy 1 <= power < n");
  MatrixXd s = MatrixXd::Zero(n, n);
  for (Eigen::Index i = power; i < n; ++i) s(i, i - power) = 1;
  return s;
}

Polarization<double> truncation_polarization(Eigen::Index n) {
  return Polarization<double>::standard(n, (n + 1) / 2);
}

Subspace<double> flow_subspace(const MatrixXd& m, double t, const Subspace<double>& w0) {
  require_square(m, "flow generator");
  require(m.rows() == w0.ambient_dim(), ErrorKind::DimensionMismatch, "flow generator size");
  return transform((t * m).eval().exp().eval(), w0);
}

MatrixXd constant_riccati_rhs(const MatrixXd& m, const MatrixXd& t) {
  require_square(m, "flow generator");
  const Eigen::Index k = t.cols();
  const Eigen::Index r = m.rows() - k;
  require(k >= 1 && r >= 1 && t.rows() == r, ErrorKind::DimensionMismatch, "chart coordinate shape");
  const MatrixXd a = m.topLeftCorner(k, k), b = m.topRightCorner(k, r);
  const MatrixXd c = m.bottomLeftCorner(r, k), d = m.bottomRightCorner(r, r);
  return c + d * t - t * a - t * b * t;
}

FlowScenario FlowScenario::make(MatrixXd generator, std::vector<Subspace<double>> initials, std::vector<double> times) {
  require_square(generator, "flow generator");
  require_finite(generator, "flow generator");
  for (const auto& w : initials)
    require(w.ambient_dim() == generator.rows(), ErrorKind::DimensionMismatch,
            "initial subspace lives in a different ambient space than the generator");
  require(!times.empty(), ErrorKind::Validation, "time grid is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(std::isfinite(times[i]), ErrorKind::Validation, "time grid has non-finite entries");
    require(i == 0 || times[i] > times[i - 1], ErrorKind::Validation, "time grid must be strictly ascending");
  }
  return FlowScenario(std::move(generator), std::move(initials), std::move(times));
}

std::vector<FlowSample> spectrum_along_flow(const FlowScenario& scenario, FlowVariant variant, int kmax) {
  const auto& init = scenario.initials();
  require(init.size() == 4, ErrorKind::Validation, "a cross-ratio flow needs exactly four initial subspaces");
  std::vector<FlowSample> out;
  out.reserve(scenario.times().size());
  for (double t : scenario.times()) {
    const MatrixXd g = (t * scenario.generator()).exp();
    auto moved = [&](std::size_t i) {
      if (i == 0 && variant == FlowVariant::FirstFixed) return init[0];
      return transform(g, init[i]);
    };
    try {
      const auto dv = dv_composition(moved(0), moved(1), moved(2), moved(3));
      FlowSample s;
      s.t = t;
      s.spectrum = dv.spectrum;
      s.traces = trace_powers(dv.matrix, kmax < 0 ? static_cast<int>(dv.matrix.rows()) : kmax);
      s.determinant = dv.determinant;
      out.push_back(std::move(s));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotPolarization) throw;
      raise(ErrorKind::NotPolarization, "flowed configuration is not admissible at t = " + std::to_string(t));
    }
  }
  return out;
}

double max_spectral_drift(const std::vector<FlowSample>& samples) {
  double drift = 0;
  for (const auto& s : samples) drift = std::max(drift, spectral_distance(samples.front().spectrum, s.spectrum));
  return drift;
}

double max_trace_drift(const std::vector<FlowSample>& samples) {
  double drift = 0;
  if (samples.empty()) return drift;
  const auto& first = samples.front();
  auto rel = [](double v, double ref) { return std::abs(v - ref) / std::max(1.0, std::abs(ref)); };
  for (const auto& s : samples) {
    for (std::size_t k = 0; k < s.traces.size() && k < first.traces.size(); ++k)
      drift = std::max(drift, rel(s.traces[k], first.traces[k]));
    drift = std::max(drift, rel(s.determinant, first.determinant));
  }
  return drift;
}

bool is_stationary(const MatrixXd& m, const Subspace<double>& w, double tolerance) {
  require(m.rows() == w.ambient_dim() && m.cols() == w.ambient_dim(), ErrorKind::DimensionMismatch,
          "is_stationary: generator size");
  const MatrixXd image = m * w.basis();
  const MatrixXd off = image - w.basis() * (w.basis().transpose() * image);
  return off.norm() <= tolerance * std::max(1.0, m.norm());
}

namespace {

struct Cluster {
  std::complex<double> center;
  Eigen::Index multiplicity = 0;
  bool complex_pair = false;
};

// Smallest right singular vectors of r.
MatrixXd smallest_right_vectors(const MatrixXd& r, Eigen::Index count) {
  Eigen::JacobiSVD<MatrixXd> svd(r, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(count);
}

Eigen::Index numerical_nullity(const MatrixXd& r) {
  const auto sv = singular_values(r);
  const double thr = 1e-6 * std::max(1.0, sv(0));
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= thr) ++count;
  return count;
}

struct Piece {
  Eigen::Index dim = 0;
  MatrixXd basis;  // empty when dim == 0
};

}  // namespace

std::vector<Subspace<double>> stationary_subspaces(const MatrixXd& m, Eigen::Index k) {
  require_square(m, "stationary_subspaces: generator");
  require_finite(m, "stationary_subspaces: generator");
  const Eigen::Index n = m.rows();
  require(k >= 1 && k < n, ErrorKind::DimensionMismatch, "stationary_subspaces: need 1 <= k < n");

  const Spectrum<double> spec = eigenvalues(m);
  const double scale = std::max(1.0, m.norm());
  const double cluster_tol = 1e-3 * scale;

  // Single-linkage clustering of the spectrum.
  std::vector<int> label(spec.size(), -1);
  int clusters = 0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (label[i] >= 0) continue;
    label[i] = clusters;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b = 0; b < spec.size(); ++b)
        if (label[b] < 0 && std::abs(spec[a] - spec[b]) <= cluster_tol) {
          label[b] = clusters;
          stack.push_back(b);
        }
    }
    ++clusters;
  }
  std::vector<Cluster> groups(static_cast<std::size_t>(clusters));
  for (std::size_t i = 0; i < spec.size(); ++i) {
    auto& g = groups[static_cast<std::size_t>(label[i])];
    g.center += spec[i];
    ++g.multiplicity;
  }
  for (auto& g : groups) g.center /= static_cast<double>(g.multiplicity);

  const MatrixXd id = MatrixXd::Identity(n, n);
  std::vector<std::vector<Piece>> options;
  for (const auto& g : groups) {
    if (g.center.imag() < -cluster_tol) continue;  // handled with its conjugate
    const bool pair = g.center.imag() > cluster_tol;
    const MatrixXd r = pair ? MatrixXd(m * m - 2 * g.center.real() * m + std::norm(g.center) * id)
                            : MatrixXd(m - g.center.real() * id);
    const Eigen::Index unit = pair ? 2 : 1;
    const bool single_chain = numerical_nullity(r) == unit;
    std::vector<Piece> choice{Piece{}};
    MatrixXd power = id;
    for (Eigen::Index j = 1; j <= g.multiplicity; ++j) {
      power = power * r;
      if (!single_chain && j < g.multiplicity) continue;
      choice.push_back(Piece{unit * j, smallest_right_vectors(power, unit * j)});
    }
    options.push_back(std::move(choice));
  }

  std::vector<Subspace<double>> out;
  constexpr std::size_t kMaxResults = 4096;
  std::vector<const Piece*> picked;
  auto dfs = [&](auto&& self, std::size_t idx, Eigen::Index remaining) -> void {
    if (out.size() >= kMaxResults) return;
    if (idx == options.size()) {
      if (remaining != 0) return;
      MatrixXd basis(n, k);
      Eigen::Index col = 0;
      for (const Piece* p : picked) {
        basis.middleCols(col, p->dim) = p->basis;
        col += p->dim;
      }
      if (inverse_condition(basis) <= tol::kRank) return;
      auto w = Subspace<double>::span(basis);
      if (is_stationary(m, w)) out.push_back(std::move(w));
      return;
    }
    for (const Piece& p : options[idx]) {
      if (p.dim > remaining) continue;
      if (p.dim > 0) picked.push_back(&p);
      self(self, idx + 1, remaining - p.dim);
      if (p.dim > 0) picked.pop_back();
    }
  };
  dfs(dfs, 0, k);
  require(!out.empty(), ErrorKind::DefectiveSpectrum,
          "no " + std::to_string(k) + "-dimensional invariant subspace can be resolved from the spectrum");
  return out;
}

double commuting_flow_residual(const MatrixXd& m1, const MatrixXd& m2, const Subspace<double>& w0, double t,
                               double s) {
  const auto first = flow_subspace(m2, s, flow_subspace(m1, t, w0));
  const auto second = flow_subspace(m1, t, flow_subspace(m2, s, w0));
  return subspace_distance(first, second);
}

TraceInvariants trace_invariants(const MatrixXd& d, int kmax) {
  require_square(d, "trace_invariants: argument");
  require_finite(d, "trace_invariants: argument");
  TraceInvariants out;
  out.traces = trace_powers(d, kmax < 0 ? static_cast<int>(d.rows()) : kmax);
  out.determinant = d.rows() == 0 ? 1.0 : d.determinant();
  return out;
}

AlmostNilpotent AlmostNilpotent::make(MatrixXd matrix, Eigen::Index block) {
  require_square(matrix, "almost nilpotent matrix");
  require_finite(matrix, "almost nilpotent matrix");
  const Eigen::Index n = matrix.rows();
  require(block >= 0 && block <= n, ErrorKind::Validation, "block size out of range");
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j; i < n; ++i) {
      if (i < block && j < block) continue;
      require(matrix(i, j) == 0.0, ErrorKind::Validation,
              "entry (" + std::to_string(i) + "," + std::to_string(j) +
                  ") outside the leading block must vanish on and below the diagonal");
    }
  return AlmostNilpotent(std::move(matrix), block);
}

}  // namespace opcross
