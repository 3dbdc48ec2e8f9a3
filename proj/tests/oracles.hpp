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

// Reference computations for the tests, written along routes independent of
// the library: explicit formulas, series and orthogonal-complement
// constructions instead of the library's QR/solve pipelines.

#ifndef OPCROSS_TESTS_ORACLES_HPP
#define OPCROSS_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Eigen::MatrixXd;

/// Orthonormal basis of the span of `cols` by modified Gram-Schmidt.
inline MatrixXd gram_schmidt(const MatrixXd& cols) {
  MatrixXd q = cols;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    q.col(j).normalize();
  }
  return q;
}

/// Orthonormal basis of the orthogonal complement, from the eigenvectors of
/// I - Q Q^T with eigenvalue 1.
inline MatrixXd complement(const MatrixXd& q) {
  const Eigen::Index n = q.rows(), k = q.cols();
  const MatrixXd p = MatrixXd::Identity(n, n) - q * q.transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(p);
  return es.eigenvectors().rightCols(n - k);
}

/// Projector onto span(U) along span(V): U (Vp^T U)^{-1} Vp^T with Vp an
/// orthonormal basis of the orthogonal complement of V.
inline MatrixXd oblique_projector(const MatrixXd& u, const MatrixXd& v) {
  const MatrixXd vp = complement(gram_schmidt(v));
  return u * (vp.transpose() * u).inverse() * vp.transpose();
}

/// Cross-ratio as the composite P1 -> P3 -> P1 written in a Gram-Schmidt
/// basis of P1.
inline MatrixXd composite_cross_ratio(const MatrixXd& p1, const MatrixXd& p2, const MatrixXd& p3,
                                      const MatrixXd& p4) {
  const MatrixXd b1 = gram_schmidt(p1);
  return b1.transpose() * oblique_projector(p1, p2) * oblique_projector(p3, p4) * b1;
}

/// Scalar cross-ratio (a - b)^{-1} (b - c) (c - d)^{-1} (d - a).
inline double scalar_cross_ratio(double a, double b, double c, double d) { return (b - c) * (d - a) / ((a - b) * (c - d)); }

/// Squared cosines of the principal angles: eigenvalues of
/// Q1^T Q2 Q2^T Q1, ascending.
inline std::vector<double> cos2_principal(const MatrixXd& a, const MatrixXd& b) {
  const MatrixXd q1 = gram_schmidt(a), q2 = gram_schmidt(b);
  const MatrixXd m = q1.transpose() * q2 * q2.transpose() * q1;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

/// Truncated Taylor series of exp, with scaling and squaring.
inline MatrixXd expm_series(const MatrixXd& m) {
  int s = 0;
  double norm = m.lpNorm<1>();
  while (norm > 0.5) {
    norm /= 2;
    ++s;
  }
  const MatrixXd a = m / std::pow(2.0, s);
  MatrixXd term = MatrixXd::Identity(m.rows(), m.cols()), sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / k;
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

/// Real parts of eigenvalues, sorted; for spectra known to be real.
inline std::vector<double> real_eigenvalues(const MatrixXd& m) {
  Eigen::EigenSolver<MatrixXd> es(m, false);
  std::vector<double> v;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) v.push_back(es.eigenvalues()(i).real());
  std::sort(v.begin(), v.end());
  return v;
}

/// Sorted pairs compared entrywise; adequate for well-separated spectra.
inline double sorted_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return INFINITY;
  const auto less = [](const std::complex<double>& x, const std::complex<double>& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline std::vector<std::complex<double>> eig(const MatrixXd& m) {
  Eigen::EigenSolver<MatrixXd> es(m, false);
  std::vector<std::complex<double>> v;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) v.push_back(es.eigenvalues()(i));
  return v;
}

/// Scalar Schwarzian from derivatives.
inline double scalar_schwarzian(double z1, double z2, double z3) { return z3 / z1 - 1.5 * (z2 / z1) * (z2 / z1); }

}  // namespace oracle

#endif  // OPCROSS_TESTS_ORACLES_HPP
