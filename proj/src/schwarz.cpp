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

#include "opcross/schwarz.hpp"

#include <cmath>
#include <string>

#include "opcross/error.hpp"

namespace opcross {

using Eigen::MatrixXd;

namespace {

void require_jet_shapes(const CurveJet& jet) {
  const Eigen::Index k = jet.z.rows();
  require(jet.z.cols() == k && jet.z1.rows() == k && jet.z1.cols() == k && jet.z2.rows() == k &&
              jet.z2.cols() == k && jet.z3.rows() == k && jet.z3.cols() == k,
          ErrorKind::DimensionMismatch, "curve jet entries must be square matrices of one size");
}

void require_symmetric(const MatrixXd& m, const std::string& what) {
  const double scale = std::max(1.0, m.norm());
  require((m - m.transpose()).norm() <= 1e-12 * scale, ErrorKind::Validation, what + " must be symmetric");
}

}  // namespace

MatrixXd schwarz(const CurveJet& jet) {
  require_jet_shapes(jet);
  const MatrixXd n = solve(jet.z1, jet.z2);
  const MatrixXd k = solve(jet.z1, jet.z3);
  return k - 1.5 * n * n;
}

CurveJet jet_from_samples(std::span<const MatrixXd> samples, double h, double t, StencilOrder order) {
  require(samples.size() >= 7 && samples.size() % 2 == 1, ErrorKind::Validation,
          "stencil needs an odd number (>= 7) of samples");
  require(h > 0 && std::isfinite(h), ErrorKind::Validation, "stencil step must be positive");
  const auto mid = static_cast<std::ptrdiff_t>(samples.size() / 2);
  auto at = [&](int j) -> const MatrixXd& { return samples[static_cast<std::size_t>(mid + j)]; };
  for (const auto& s : samples) {
    require(s.rows() == at(0).rows() && s.cols() == at(0).cols(), ErrorKind::DimensionMismatch,
            "stencil samples differ in shape");
    require_finite(s, "stencil sample");
  }
  CurveJet jet;
  jet.t = t;
  jet.z = at(0);
  if (order == StencilOrder::Second) {
    jet.z1 = (at(1) - at(-1)) / (2 * h);
    jet.z2 = (at(1) - 2 * at(0) + at(-1)) / (h * h);
    jet.z3 = (at(2) - 2 * at(1) + 2 * at(-1) - at(-2)) / (2 * h * h * h);
  } else {
    jet.z1 = (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h);
    jet.z2 = (-at(2) + 16 * at(1) - 30 * at(0) + 16 * at(-1) - at(-2)) / (12 * h * h);
    jet.z3 = (-at(3) + 8 * at(2) - 13 * at(1) + 13 * at(-1) - 8 * at(-2) + at(-3)) / (8 * h * h * h);
  }
  return jet;
}

MatrixXd schwarz_from_samples(std::span<const MatrixXd> samples, double h, StencilOrder order) {
  return schwarz(jet_from_samples(samples, h, 0, order));
}

MatrixXd schwarz_richardson(std::span<const MatrixXd> samples_h, std::span<const MatrixXd> samples_half_h, double h,
                            StencilOrder order) {
  const MatrixXd coarse = schwarz_from_samples(samples_h, h, order);
  const MatrixXd fine = schwarz_from_samples(samples_half_h, h / 2, order);
  const double w = std::pow(2.0, static_cast<int>(order));
  return (w * fine - coarse) / (w - 1);
}

CurveJet mobius_curve_jet(const MobiusBlocks& m, const CurveJet& jet) {
  require_jet_shapes(jet);
  const Eigen::Index k = jet.z.rows();
  for (const MatrixXd* c : {&m.c1, &m.c2, &m.c3, &m.c4})
    require(c->rows() == k && c->cols() == k, ErrorKind::DimensionMismatch, "Mobius block shape");

  // Y = N E with N = C1 z + C2, D = C3 z + C4, E = D^{-1}.
  const MatrixXd n0 = m.c1 * jet.z + m.c2;
  const MatrixXd n1 = m.c1 * jet.z1, n2 = m.c1 * jet.z2, n3 = m.c1 * jet.z3;
  const MatrixXd d0 = m.c3 * jet.z + m.c4;
  const MatrixXd d1 = m.c3 * jet.z1, d2 = m.c3 * jet.z2, d3 = m.c3 * jet.z3;
  const MatrixXd e0 = inverse(d0);
  const MatrixXd e1 = -e0 * d1 * e0;
  const MatrixXd e2 = -(e1 * d1 * e0 + e0 * d2 * e0 + e0 * d1 * e1);
  const MatrixXd e3 = -(e2 * d1 * e0 + 2 * e1 * d2 * e0 + 2 * e1 * d1 * e1 + e0 * d3 * e0 + 2 * e0 * d2 * e1 +
                        e0 * d1 * e2);
  CurveJet out;
  out.t = jet.t;
  out.z = n0 * e0;
  out.z1 = n1 * e0 + n0 * e1;
  out.z2 = n2 * e0 + 2 * n1 * e1 + n0 * e2;
  out.z3 = n3 * e0 + 3 * n2 * e1 + 3 * n1 * e2 + n0 * e3;
  return out;
}

MatrixPolynomial::MatrixPolynomial(Eigen::Index rows, Eigen::Index cols, std::vector<MatrixXd> coeffs)
    : rows_(rows), cols_(cols), coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_) {
    require(c.rows() == rows_ && c.cols() == cols_, ErrorKind::DimensionMismatch,
            "polynomial coefficient has shape " + std::to_string(c.rows()) + "x" + std::to_string(c.cols()) +
                ", expected " + std::to_string(rows_) + "x" + std::to_string(cols_));
    require_finite(c, "polynomial coefficient");
  }
}

MatrixPolynomial MatrixPolynomial::constant(const MatrixXd& value) {
  return MatrixPolynomial(value.rows(), value.cols(), {value});
}

MatrixXd MatrixPolynomial::operator()(double t) const {
  MatrixXd acc = MatrixXd::Zero(rows_, cols_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

MatrixPolynomial MatrixPolynomial::derivative() const {
  std::vector<MatrixXd> d;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d.push_back(static_cast<double>(k) * coeffs_[k]);
  if (d.empty()) d.push_back(MatrixXd::Zero(rows_, cols_));
  return MatrixPolynomial(rows_, cols_, std::move(d));
}

HamiltonianSystem HamiltonianSystem::make(Eigen::Index dim, std::vector<MatrixXd> a_coeffs,
                                          std::vector<MatrixXd> b_coeffs, bool symmetric_a) {
  require(dim >= 1, ErrorKind::Validation, "system dimension must be positive");
  HamiltonianSystem sys;
  sys.dim_ = dim;
  sys.symmetric_a_ = symmetric_a;
  sys.a_ = MatrixPolynomial(dim, dim, std::move(a_coeffs));
  sys.b_ = MatrixPolynomial(dim, dim, std::move(b_coeffs));
  for (const auto& c : sys.b_.coefficients()) require_symmetric(c, "B coefficient");
  if (symmetric_a)
    for (const auto& c : sys.a_.coefficients()) require_symmetric(c, "A coefficient");
  sys.a_prime_ = sys.a_.derivative();
  return sys;
}

PhasePoint hamiltonian_rhs(const HamiltonianSystem& sys, double t, const PhasePoint& x) {
  require(x.q.rows() == sys.dim() && x.p.rows() == sys.dim() && x.q.cols() == x.p.cols(),
          ErrorKind::DimensionMismatch, "phase point shape");
  const MatrixXd a = sys.a(t);
  return {a * x.q + x.p, -sys.b(t) * x.q - a.transpose() * x.p};
}

HamiltonianTrajectory integrate_hamiltonian(const HamiltonianSystem& sys, const PhasePoint& x0, double t0, double t1,
                                            int steps) {
  require(steps >= 1, ErrorKind::Validation, "steps must be at least 1");
  require(std::isfinite(t0) && std::isfinite(t1), ErrorKind::Validation, "integration bounds must be finite");
  require_finite(x0.q, "initial q");
  require_finite(x0.p, "initial p");
  const double h = (t1 - t0) / steps;
  HamiltonianTrajectory out;
  out.times.reserve(static_cast<std::size_t>(steps) + 1);
  out.states.reserve(static_cast<std::size_t>(steps) + 1);
  PhasePoint x = x0;
  out.times.push_back(t0);
  out.states.push_back(x);
  auto shifted = [](const PhasePoint& base, const PhasePoint& k, double s) {
    return PhasePoint{base.q + s * k.q, base.p + s * k.p};
  };
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    const PhasePoint k1 = hamiltonian_rhs(sys, t, x);
    const PhasePoint k2 = hamiltonian_rhs(sys, t + h / 2, shifted(x, k1, h / 2));
    const PhasePoint k3 = hamiltonian_rhs(sys, t + h / 2, shifted(x, k2, h / 2));
    const PhasePoint k4 = hamiltonian_rhs(sys, t + h, shifted(x, k3, h));
    x.q += h / 6 * (k1.q + 2 * k2.q + 2 * k3.q + k4.q);
    x.p += h / 6 * (k1.p + 2 * k2.p + 2 * k3.p + k4.p);
    require(x.q.allFinite() && x.p.allFinite(), ErrorKind::BlowUp,
            "Hamiltonian solution overflows near t = " + std::to_string(t + h));
    out.times.push_back(i + 1 == steps ? t1 : t0 + (i + 1) * h);
    out.states.push_back(x);
  }
  return out;
}

MatrixXd symplectic_pairing(const PhasePoint& x, const PhasePoint& y) {
  return x.p.transpose() * y.q - x.q.transpose() * y.p;
}

MatrixXd riccati_rhs(const HamiltonianSystem& sys, double t, const MatrixXd& w) {
  require(w.rows() == sys.dim() && w.cols() == sys.dim(), ErrorKind::DimensionMismatch, "Riccati state shape");
  const MatrixXd a = sys.a(t);
  return -sys.b(t) - a.transpose() * w - w * a - w * w;
}

namespace {

struct RiccatiRun {
  bool escaped = false;
  double escape_time = 0;
  MatrixTrajectory trajectory;
};

RiccatiRun run_riccati(const HamiltonianSystem& sys, const MatrixXd& w0, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  RiccatiRun run;
  run.trajectory.times.push_back(t0);
  run.trajectory.values.push_back(w0);
  MatrixXd w = w0;
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    const MatrixXd k1 = riccati_rhs(sys, t, w);
    const MatrixXd k2 = riccati_rhs(sys, t + h / 2, w + h / 2 * k1);
    const MatrixXd k3 = riccati_rhs(sys, t + h / 2, w + h / 2 * k2);
    const MatrixXd k4 = riccati_rhs(sys, t + h, w + h * k3);
    w += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    const double tn = i + 1 == steps ? t1 : t0 + (i + 1) * h;
    if (!w.allFinite() || w.norm() > kRiccatiBlowUp) {
      run.escaped = true;
      run.escape_time = tn;
      return run;
    }
    run.trajectory.times.push_back(tn);
    run.trajectory.values.push_back(w);
  }
  return run;
}

}  // namespace

MatrixTrajectory integrate_riccati(const HamiltonianSystem& sys, const MatrixXd& w0, double t0, double t1,
                                   int steps) {
  require(steps >= 1, ErrorKind::Validation, "steps must be at least 1");
  require(std::isfinite(t0) && std::isfinite(t1), ErrorKind::Validation, "integration bounds must be finite");
  require(w0.rows() == sys.dim() && w0.cols() == sys.dim(), ErrorKind::DimensionMismatch, "initial W shape");
  require_finite(w0, "initial W");
  RiccatiRun run = run_riccati(sys, w0, t0, t1, steps);
  if (!run.escaped) return std::move(run.trajectory);

  RiccatiRun retry = run_riccati(sys, w0, t0, t1, 2 * steps);
  if (retry.escaped)
    raise(ErrorKind::BlowUp, "Riccati solution escapes near t = " + std::to_string(retry.escape_time));
  MatrixTrajectory out;
  for (std::size_t i = 0; i < retry.trajectory.times.size(); i += 2) {
    out.times.push_back(retry.trajectory.times[i]);
    out.values.push_back(std::move(retry.trajectory.values[i]));
  }
  return out;
}

MatrixXd w_from_jet(const CurveJet& jet, const MatrixXd& a_t) {
  require_jet_shapes(jet);
  require(a_t.rows() == jet.z.rows() && a_t.cols() == jet.z.rows(), ErrorKind::DimensionMismatch, "A(t) shape");
  require_symmetric(a_t, "A(t)");
  return -0.5 * solve(jet.z1, jet.z2) - a_t;
}

MatrixXd schwarz_equation_rhs(const HamiltonianSystem& sys, double t) {
  const MatrixXd a = sys.a(t);
  return 2 * sys.b(t) - 2 * sys.a_prime(t) - 2 * a * a;
}

MatrixXd schwarz_equation_residual(const CurveJet& jet, const HamiltonianSystem& sys, double t) {
  require(sys.symmetric_a(), ErrorKind::Validation, "the Schwarz equation needs a symmetric A");
  require(jet.z.rows() == sys.dim(), ErrorKind::DimensionMismatch, "jet size differs from system dimension");
  return schwarz(jet) - schwarz_equation_rhs(sys, t);
}

MatrixXd euler_residual(const MatrixXd& q, const MatrixXd& q1, const MatrixXd& q2, const HamiltonianSystem& sys,
                        double t) {
  require(q.rows() == sys.dim() && q1.rows() == sys.dim() && q2.rows() == sys.dim() && q.cols() == q1.cols() &&
              q.cols() == q2.cols(),
          ErrorKind::DimensionMismatch, "Euler residual operand shapes");
  const MatrixXd a = sys.a(t);
  return q2 + (a.transpose() - a) * q1 + (sys.b(t) - sys.a_prime(t) - a.transpose() * a) * q;
}

std::vector<CurveJet> curve_from_riccati(const MatrixTrajectory& w, const HamiltonianSystem& sys,
                                         const MatrixXd& z0, const MatrixXd& z1_0) {
  require(sys.symmetric_a(), ErrorKind::Validation, "the W-z relation needs a symmetric A");
  require(!w.times.empty() && w.times.size() == w.values.size(), ErrorKind::Validation, "empty W trajectory");
  const Eigen::Index n = sys.dim();
  require(z0.rows() == n && z0.cols() == n && z1_0.rows() == n && z1_0.cols() == n, ErrorKind::DimensionMismatch,
          "initial curve data shape");
  require(is_invertible(z1_0), ErrorKind::Singular, "initial z' is not invertible");

  auto jet_at = [&](double t, const MatrixXd& z, const MatrixXd& y, const MatrixXd& wt) {
    require(is_invertible(y, 1e-10), ErrorKind::Singular, "z' degenerates at t = " + std::to_string(t));
    const MatrixXd shift = wt + sys.a(t);
    CurveJet jet;
    jet.t = t;
    jet.z = z;
    jet.z1 = y;
    jet.z2 = -2 * y * shift;
    jet.z3 = -2 * jet.z2 * shift - 2 * y * (riccati_rhs(sys, t, wt) + sys.a_prime(t));
    return jet;
  };

  std::vector<CurveJet> out;
  out.reserve(w.times.size());
  MatrixXd z = z0, y = z1_0;
  out.push_back(jet_at(w.times[0], z, y, w.values[0]));
  for (std::size_t i = 0; i + 1 < w.times.size(); ++i) {
    const double ta = w.times[i], tb = w.times[i + 1];
    const double h = tb - ta;
    const MatrixXd& wa = w.values[i];
    const MatrixXd& wb = w.values[i + 1];
    const MatrixXd da = riccati_rhs(sys, ta, wa);
    const MatrixXd db = riccati_rhs(sys, tb, wb);
    const MatrixXd wmid = 0.5 * (wa + wb) + h / 8 * (da - db);
    auto force = [&](double t, const MatrixXd& wt, const MatrixXd& yy) -> MatrixXd {
      return -2 * yy * (wt + sys.a(t));
    };
    const MatrixXd kz1 = y;
    const MatrixXd ky1 = force(ta, wa, y);
    const MatrixXd kz2 = y + h / 2 * ky1;
    const MatrixXd ky2 = force(ta + h / 2, wmid, kz2);
    const MatrixXd kz3 = y + h / 2 * ky2;
    const MatrixXd ky3 = force(ta + h / 2, wmid, kz3);
    const MatrixXd kz4 = y + h * ky3;
    const MatrixXd ky4 = force(tb, wb, kz4);
    z += h / 6 * (kz1 + 2 * kz2 + 2 * kz3 + kz4);
    y += h / 6 * (ky1 + 2 * ky2 + 2 * ky3 + ky4);
    out.push_back(jet_at(tb, z, y, wb));
  }
  return out;
}

}  // namespace opcross
