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

// Operator Schwarzian derivative of matrix curves, and its correspondence with
// linear Hamiltonian systems
//
//     q' = A q + p,    p' = -B q - A^T p        (B symmetric)
//
// and the matrix Riccati equation W' = -B - A^T W - W A - W^2 satisfied by
// W = p q^{-1}.

#ifndef OPCROSS_SCHWARZ_HPP
#define OPCROSS_SCHWARZ_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "opcross/numerics.hpp"

namespace opcross {

/// Value and first three derivatives of a square matrix curve at t.
struct CurveJet {
  double t = 0;
  Eigen::MatrixXd z, z1, z2, z3;
};

/// S(z) = (z')^{-1} z''' - 3/2 ((z')^{-1} z'')^2. Throws Singular when z' is
/// not invertible.
Eigen::MatrixXd schwarz(const CurveJet& jet);

enum class StencilOrder { Second = 2, Fourth = 4 };

/// Derivatives from 2m+1 samples z(t + j h), j = -m..m, m >= 3, by central
/// differences of the given order (the fourth-order stencil uses all seven
/// central points).
CurveJet jet_from_samples(std::span<const Eigen::MatrixXd> samples, double h, double t = 0,
                          StencilOrder order = StencilOrder::Fourth);

Eigen::MatrixXd schwarz_from_samples(std::span<const Eigen::MatrixXd> samples, double h,
                                     StencilOrder order = StencilOrder::Fourth);

/// Richardson extrapolation of the stencil Schwarzian from steps h and h/2.
Eigen::MatrixXd schwarz_richardson(std::span<const Eigen::MatrixXd> samples_h,
                                   std::span<const Eigen::MatrixXd> samples_half_h, double h,
                                   StencilOrder order = StencilOrder::Fourth);

/// Blocks of z -> (C1 z + C2)(C3 z + C4)^{-1}.
struct MobiusBlocks {
  Eigen::MatrixXd c1, c2, c3, c4;
};

/// Jet of M(z(t)) through third order by the exact chain rule.
CurveJet mobius_curve_jet(const MobiusBlocks& m, const CurveJet& jet);

/// Matrix-valued polynomial sum_k coeffs[k] t^k.
class MatrixPolynomial {
 public:
  MatrixPolynomial() = default;
  MatrixPolynomial(Eigen::Index rows, Eigen::Index cols, std::vector<Eigen::MatrixXd> coeffs);

  static MatrixPolynomial constant(const Eigen::MatrixXd& value);

  Eigen::MatrixXd operator()(double t) const;
  MatrixPolynomial derivative() const;

  const std::vector<Eigen::MatrixXd>& coefficients() const { return coeffs_; }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

 private:
  Eigen::Index rows_ = 0, cols_ = 0;
  std::vector<Eigen::MatrixXd> coeffs_;
};

/// Coefficients A(t), B(t) of a linear Hamiltonian system, B(t) symmetric.
class HamiltonianSystem {
 public:
  /// Throws Validation when B (or A, if `symmetric_a`) has a non-symmetric
  /// coefficient, DimensionMismatch when shapes disagree with dim.
  static HamiltonianSystem make(Eigen::Index dim, std::vector<Eigen::MatrixXd> a_coeffs,
                                std::vector<Eigen::MatrixXd> b_coeffs, bool symmetric_a);

  Eigen::Index dim() const { return dim_; }
  bool symmetric_a() const { return symmetric_a_; }
  const MatrixPolynomial& a_poly() const { return a_; }
  const MatrixPolynomial& b_poly() const { return b_; }

  Eigen::MatrixXd a(double t) const { return a_(t); }
  Eigen::MatrixXd b(double t) const { return b_(t); }
  Eigen::MatrixXd a_prime(double t) const { return a_prime_(t); }

 private:
  Eigen::Index dim_ = 0;
  bool symmetric_a_ = false;
  MatrixPolynomial a_, b_, a_prime_;
};

/// Fundamental-system phase point: q and p are both n x n.
struct PhasePoint {
  Eigen::MatrixXd q, p;
};

PhasePoint hamiltonian_rhs(const HamiltonianSystem& sys, double t, const PhasePoint& x);

struct HamiltonianTrajectory {
  std::vector<double> times;
  std::vector<PhasePoint> states;
};

/// Classical fourth-order Runge-Kutta with `steps` fixed steps.
HamiltonianTrajectory integrate_hamiltonian(const HamiltonianSystem& sys, const PhasePoint& x0, double t0,
                                            double t1, int steps);

/// p^T q~ - q^T p~, constant along pairs of solutions.
Eigen::MatrixXd symplectic_pairing(const PhasePoint& x, const PhasePoint& y);

/// W' = -B - A^T W - W A - W^2.
Eigen::MatrixXd riccati_rhs(const HamiltonianSystem& sys, double t, const Eigen::MatrixXd& w);

struct MatrixTrajectory {
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> values;
};

/// Norm of W beyond which the Riccati solution is declared to escape.
inline constexpr double kRiccatiBlowUp = 1e8;

/// Fourth-order Runge-Kutta on the Riccati equation. On escape the whole run
/// is retried once with half the step; a second escape throws BlowUp.
MatrixTrajectory integrate_riccati(const HamiltonianSystem& sys, const Eigen::MatrixXd& w0, double t0, double t1,
                                   int steps);

/// W = -1/2 (z')^{-1} z'' - A. A must be symmetric.
Eigen::MatrixXd w_from_jet(const CurveJet& jet, const Eigen::MatrixXd& a_t);

/// Right-hand side of the Schwarz equation S(z) = 2B - 2A' - 2A^2 for
/// symmetric A.
Eigen::MatrixXd schwarz_equation_rhs(const HamiltonianSystem& sys, double t);

/// S(z) - (2B(t) - 2A'(t) - 2A(t)^2); zero iff the jet satisfies the Schwarz
/// equation of the system at t.
Eigen::MatrixXd schwarz_equation_residual(const CurveJet& jet, const HamiltonianSystem& sys, double t);

/// q'' + (A^T - A) q' + (B - A' - A^T A) q.
Eigen::MatrixXd euler_residual(const Eigen::MatrixXd& q, const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2,
                               const HamiltonianSystem& sys, double t);

/// Solves z'' = -2 z' (W(t) + A(t)) on the grid of `w` from z(t0) = z0,
/// z'(t0) = z1_0, interpolating W between grid points by cubic Hermite
/// segments with slopes from the Riccati equation. Returns the jet of z at
/// every grid point.
std::vector<CurveJet> curve_from_riccati(const MatrixTrajectory& w, const HamiltonianSystem& sys,
                                         const Eigen::MatrixXd& z0, const Eigen::MatrixXd& z1_0);

}  // namespace opcross

#endif  // OPCROSS_SCHWARZ_HPP
