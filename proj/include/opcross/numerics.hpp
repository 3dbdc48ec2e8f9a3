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

// Dense linear-algebra kernel shared by every module. All routines are free
// function templates over Eigen dense expressions; the scalar may be real or
// complex (adjoint() is the transpose in the real case).

#ifndef OPCROSS_NUMERICS_HPP
#define OPCROSS_NUMERICS_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "opcross/error.hpp"

namespace opcross {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RealOf = typename Eigen::NumTraits<Scalar>::Real;

/// Eigenvalue multiset, sorted lexicographically by (real, imaginary).
template <typename Real>
using Spectrum = std::vector<std::complex<Real>>;

namespace tol {
/// An inverse is refused when sigma_min < kSingular * sigma_max.
inline constexpr double kSingular = 1e-12;
/// Full column rank threshold for building subspaces from spanning columns.
inline constexpr double kRank = 1e-10;
/// Direct-sum threshold on the smallest singular value of stacked bases.
inline constexpr double kDirectSum = 1e-8;
/// Absolute tolerance for comparing eigenvalue multisets.
inline constexpr double kSpectral = 1e-8;
/// Default tolerance for boolean classification decisions.
inline constexpr double kDecision = 1e-6;
/// Projector distance below which two subspaces are considered equal.
inline constexpr double kSubspaceEqual = 1e-8;
}  // namespace tol

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const std::string& what) {
  require(m.allFinite(), ErrorKind::Validation, what + " has non-finite entries");
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const std::string& what) {
  require(m.rows() == m.cols(), ErrorKind::DimensionMismatch,
          what + " must be square, got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

/// Singular values in descending order.
template <typename Derived>
Vec<RealOf<typename Derived::Scalar>> singular_values(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<Mat<Scalar>> svd(m.eval());
  return svd.singularValues();
}

/// sigma_min / sigma_max, or 0 for a zero or empty matrix.
template <typename Derived>
RealOf<typename Derived::Scalar> inverse_condition(const Eigen::MatrixBase<Derived>& m) {
  const auto sv = singular_values(m);
  if (sv.size() == 0 || !(sv(0) > 0)) return 0;
  return sv(sv.size() - 1) / sv(0);
}

template <typename Derived>
bool is_invertible(const Eigen::MatrixBase<Derived>& m, double rel = tol::kSingular) {
  return m.rows() == m.cols() && m.rows() > 0 && inverse_condition(m) >= rel;
}

/// Solves A X = B. Throws Singular when A is numerically singular.
template <typename DerivedA, typename DerivedB>
Mat<typename DerivedA::Scalar> solve(const Eigen::MatrixBase<DerivedA>& a,
                                     const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  require_square(a, "solve: coefficient matrix");
  require(a.rows() == b.rows(), ErrorKind::DimensionMismatch,
          "solve: right-hand side has " + std::to_string(b.rows()) + " rows, expected " +
              std::to_string(a.rows()));
  require_finite(a, "solve: coefficient matrix");
  require_finite(b, "solve: right-hand side");
  const Mat<Scalar> lhs = a;
  require(is_invertible(lhs), ErrorKind::Singular,
          "solve: matrix is singular (inverse condition " + std::to_string(inverse_condition(lhs)) + ")");
  return lhs.fullPivLu().solve(b.template cast<Scalar>());
}

/// Solves X A = B, i.e. returns B A^{-1}.
template <typename DerivedB, typename DerivedA>
Mat<typename DerivedA::Scalar> solve_right(const Eigen::MatrixBase<DerivedB>& b,
                                           const Eigen::MatrixBase<DerivedA>& a) {
  require(a.cols() == b.cols(), ErrorKind::DimensionMismatch,
          "solve_right: left-hand side has " + std::to_string(b.cols()) + " columns, expected " +
              std::to_string(a.cols()));
  return solve(a.transpose(), b.transpose()).transpose();
}

template <typename Derived>
Mat<typename Derived::Scalar> inverse(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  return solve(a, Mat<Scalar>::Identity(a.rows(), a.rows()));
}

template <typename Real>
void sort_spectrum(Spectrum<Real>& s) {
  std::sort(s.begin(), s.end(), [](const std::complex<Real>& x, const std::complex<Real>& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
}

template <typename Derived>
Spectrum<RealOf<typename Derived::Scalar>> eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Real = RealOf<Scalar>;
  require_square(m, "eigenvalues: argument");
  Spectrum<Real> out;
  if (m.rows() == 0) return out;
  const Mat<Scalar> a = m;
  require_finite(a, "eigenvalues: argument");
  if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
    Eigen::ComplexEigenSolver<Mat<Scalar>> es(a, false);
    require(es.info() == Eigen::Success, ErrorKind::NonConvergence, "eigenvalues: QR iteration did not converge");
    out.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  } else {
    Eigen::EigenSolver<Mat<Scalar>> es(a, false);
    require(es.info() == Eigen::Success, ErrorKind::NonConvergence, "eigenvalues: QR iteration did not converge");
    out.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  }
  sort_spectrum(out);
  return out;
}

/// Matrix exponential (Pade approximation with scaling and squaring).
template <typename Derived>
Mat<typename Derived::Scalar> expm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  require_square(m, "expm: argument");
  const Mat<Scalar> a = m;
  require_finite(a, "expm: argument");
  if (a.rows() == 0) return a;
  Mat<Scalar> out = a.exp();
  return out;
}

namespace detail {

// Kuhn augmenting path on the bipartite graph adj[i][j] = (|a_i - b_j| <= threshold).
inline bool augment(std::size_t i, const std::vector<std::vector<char>>& adj, std::vector<int>& match,
                    std::vector<char>& seen) {
  for (std::size_t j = 0; j < adj[i].size(); ++j) {
    if (!adj[i][j] || seen[j]) continue;
    seen[j] = 1;
    if (match[j] < 0 || augment(static_cast<std::size_t>(match[j]), adj, match, seen)) {
      match[j] = static_cast<int>(i);
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Bottleneck distance between two eigenvalue multisets: the smallest d such
/// that some bijection pairs every eigenvalue with one at distance <= d.
/// Multisets of different size are infinitely far apart.
template <typename Real>
Real spectral_distance(const Spectrum<Real>& a, const Spectrum<Real>& b) {
  if (a.size() != b.size()) return std::numeric_limits<Real>::infinity();
  const std::size_t n = a.size();
  if (n == 0) return 0;
  std::vector<Real> cands;
  cands.reserve(n * n);
  for (const auto& x : a)
    for (const auto& y : b) cands.push_back(std::abs(x - y));
  std::sort(cands.begin(), cands.end());
  auto feasible = [&](Real threshold) {
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) adj[i][j] = std::abs(a[i] - b[j]) <= threshold;
    std::vector<int> match(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<char> seen(n, 0);
      if (!detail::augment(i, adj, match, seen)) return false;
    }
    return true;
  };
  std::size_t lo = 0, hi = cands.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(cands[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return cands[lo];
}

template <typename Real>
bool spectra_match(const Spectrum<Real>& a, const Spectrum<Real>& b, Real tolerance = tol::kSpectral) {
  return spectral_distance(a, b) <= tolerance;
}

/// tr(D^k) for k = 1..kmax.
template <typename Derived>
std::vector<typename Derived::Scalar> trace_powers(const Eigen::MatrixBase<Derived>& d, int kmax) {
  using Scalar = typename Derived::Scalar;
  require_square(d, "trace_powers: argument");
  std::vector<Scalar> out;
  if (kmax <= 0) return out;
  const Mat<Scalar> base = d;
  Mat<Scalar> power = base;
  for (int k = 1; k <= kmax; ++k) {
    out.push_back(power.trace());
    if (k < kmax) power = (power * base).eval();
  }
  return out;
}

/// Orthogonal projector B B^* onto the column space of an orthonormal basis.
template <typename Derived>
Mat<typename Derived::Scalar> projector(const Eigen::MatrixBase<Derived>& basis) {
  return basis * basis.adjoint();
}

/// Orthonormal basis of the null space of m, given the expected dimension.
/// Throws DegeneratePosition when the numerical nullity differs.
template <typename Derived>
Mat<typename Derived::Scalar> null_space(const Eigen::MatrixBase<Derived>& m, Eigen::Index expected,
                                         double threshold) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index cols = m.cols();
  Eigen::JacobiSVD<Mat<Scalar>> svd(m.eval(), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index nullity = cols - sv.size();
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= threshold) ++nullity;
  require(nullity == expected, ErrorKind::DegeneratePosition,
          "null space has dimension " + std::to_string(nullity) + ", expected " + std::to_string(expected));
  return svd.matrixV().rightCols(expected);
}

}  // namespace opcross

#endif  // OPCROSS_NUMERICS_HPP
