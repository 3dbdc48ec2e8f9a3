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

// Finite truncation of constant-coefficient Riccati flows on the Grassmannian:
// one-parameter Mobius groups exp(tM) acting on subspaces, the cross-ratio
// spectra and trace invariants they conserve, and their stationary points.

#ifndef OPCROSS_FLOWS_HPP
#define OPCROSS_FLOWS_HPP

#include <vector>

#include <Eigen/Dense>

#include "opcross/crossratio.hpp"
#include "opcross/grassmann.hpp"

namespace opcross {

/// Ones on the power-th subdiagonal of an n x n matrix: the truncated
/// multiplication-by-z^{-power} generator.
Eigen::MatrixXd shift_generator(Eigen::Index n, Eigen::Index power);

/// Polarization of the n-dimensional truncation: first ceil(n/2) coordinates
/// against the rest.
Polarization<double> truncation_polarization(Eigen::Index n);

/// exp(tM) applied to W0.
Subspace<double> flow_subspace(const Eigen::MatrixXd& m, double t, const Subspace<double>& w0);

/// Right-hand side c + dT - Ta - TbT of the chart ODE induced by the
/// generator M = (a b; c d), with the block split taken from T's shape.
Eigen::MatrixXd constant_riccati_rhs(const Eigen::MatrixXd& m, const Eigen::MatrixXd& t);

class FlowScenario {
 public:
  /// Throws Validation for a non-ascending grid, DimensionMismatch when the
  /// initials do not share the generator's ambient dimension.
  static FlowScenario make(Eigen::MatrixXd generator, std::vector<Subspace<double>> initials,
                           std::vector<double> times);

  const Eigen::MatrixXd& generator() const { return generator_; }
  const std::vector<Subspace<double>>& initials() const { return initials_; }
  const std::vector<double>& times() const { return times_; }

 private:
  FlowScenario(Eigen::MatrixXd g, std::vector<Subspace<double>> i, std::vector<double> t)
      : generator_(std::move(g)), initials_(std::move(i)), times_(std::move(t)) {}
  Eigen::MatrixXd generator_;
  std::vector<Subspace<double>> initials_;
  std::vector<double> times_;
};

enum class FlowVariant {
  AllFlowed,   // all four subspaces move along the flow
  FirstFixed,  // the first subspace is held at its initial position
};

struct FlowSample {
  double t = 0;
  Spectrum<double> spectrum;
  std::vector<double> traces;  // tr(D^k), k = 1..kmax
  double determinant = 0;
};

/// Cross-ratio of the four flowed subspaces at every grid time. Throws
/// NotPolarization, naming the offending time, when a flowed configuration
/// stops being admissible.
std::vector<FlowSample> spectrum_along_flow(const FlowScenario& scenario, FlowVariant variant = FlowVariant::AllFlowed,
                                            int kmax = -1);

/// Largest bottleneck distance between the spectrum at any grid time and at
/// the first one.
double max_spectral_drift(const std::vector<FlowSample>& samples);

/// Largest relative change |v(t) - v(t0)| / max(1, |v(t0)|) of any trace
/// invariant (traces and determinant) over the grid.
double max_trace_drift(const std::vector<FlowSample>& samples);

/// M W is contained in W up to `tolerance` (relative to max(1, |M|)).
bool is_stationary(const Eigen::MatrixXd& m, const Subspace<double>& w, double tolerance = 1e-8);

/// k-dimensional real invariant subspaces of M assembled from whole
/// eigenvalue clusters (complex clusters together with their conjugates) and,
/// for clusters carrying a single Jordan chain, from its kernel flag.
/// Throws DefectiveSpectrum when no such subspace can be resolved.
std::vector<Subspace<double>> stationary_subspaces(const Eigen::MatrixXd& m, Eigen::Index k);

/// Projector distance between flowing by (M1, t) then (M2, s) and the reverse
/// order.
double commuting_flow_residual(const Eigen::MatrixXd& m1, const Eigen::MatrixXd& m2, const Subspace<double>& w0,
                               double t, double s);

struct TraceInvariants {
  std::vector<double> traces;  // tr(D^k), k = 1..kmax
  double determinant = 0;
};

/// kmax < 0 selects the matrix dimension.
TraceInvariants trace_invariants(const Eigen::MatrixXd& d, int kmax = -1);

/// Upper-triangular with zero diagonal outside a leading dense block.
class AlmostNilpotent {
 public:
  /// Throws Validation when an entry on or below the diagonal outside the
  /// leading block is non-zero.
  static AlmostNilpotent make(Eigen::MatrixXd matrix, Eigen::Index block);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  Eigen::Index block_size() const { return block_; }
  Eigen::MatrixXd block() const { return matrix_.topLeftCorner(block_, block_); }

 private:
  AlmostNilpotent(Eigen::MatrixXd m, Eigen::Index b) : matrix_(std::move(m)), block_(b) {}
  Eigen::MatrixXd matrix_;
  Eigen::Index block_ = 0;
};

}  // namespace opcross

#endif  // OPCROSS_FLOWS_HPP
