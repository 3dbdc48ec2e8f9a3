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

// Subspaces of a finite-dimensional inner-product space, polarizations,
// oblique projections, graph (big-cell) coordinates and the Mobius action of
// invertible block matrices on them.
//
// Subspaces are always stored through an orthonormal basis. Oblique data (a
// projection along a non-orthogonal complement, a chart relative to a skew
// polarization) lives in the operations, never in the type.

#ifndef OPCROSS_GRASSMANN_HPP
#define OPCROSS_GRASSMANN_HPP

#include <cstdint>
#include <string>
#include <utility>

#include "opcross/numerics.hpp"
#include "opcross/random.hpp"

namespace opcross {

template <typename Scalar>
class Subspace {
 public:
  using Matrix = Mat<Scalar>;

  /// Column space of `cols`, orthonormalized. Throws RankDeficient unless
  /// sigma_min(cols) > 1e-10 sigma_max(cols).
  template <typename Derived>
  static Subspace span(const Eigen::MatrixBase<Derived>& cols) {
    const Matrix m = cols.template cast<Scalar>();
    const Eigen::Index n = m.rows();
    const Eigen::Index k = m.cols();
    require(k >= 1 && k < n, ErrorKind::DimensionMismatch,
            "subspace dimension must satisfy 1 <= k < n, got k=" + std::to_string(k) + " n=" + std::to_string(n));
    require_finite(m, "subspace basis");
    require(inverse_condition(m) > tol::kRank, ErrorKind::RankDeficient,
            "spanning columns are rank deficient (inverse condition " + std::to_string(inverse_condition(m)) + ")");
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ() * Matrix::Identity(n, k);
    // Positive diagonal in R makes the factorization unique, so an already
    // orthonormal basis is returned unchanged.
    for (Eigen::Index i = 0; i < k; ++i) {
      const Scalar r = qr.matrixQR()(i, i);
      if (std::abs(r) > 0) q.col(i) *= std::abs(r) / r;
    }
    return Subspace(std::move(q));
  }

  Eigen::Index ambient_dim() const { return basis_.rows(); }
  Eigen::Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  Matrix projector() const { return opcross::projector(basis_); }

 private:
  explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
  Matrix basis_;
};

template <typename Derived>
Subspace<typename Derived::Scalar> subspace_from_basis(const Eigen::MatrixBase<Derived>& cols) {
  return Subspace<typename Derived::Scalar>::span(cols);
}

/// Frobenius distance between orthogonal projectors.
template <typename Scalar>
RealOf<Scalar> subspace_distance(const Subspace<Scalar>& a, const Subspace<Scalar>& b) {
  if (a.ambient_dim() != b.ambient_dim()) return std::numeric_limits<RealOf<Scalar>>::infinity();
  return (a.projector() - b.projector()).norm();
}

template <typename Scalar>
bool same_subspace(const Subspace<Scalar>& a, const Subspace<Scalar>& b, double tolerance = tol::kSubspaceEqual) {
  return a.dim() == b.dim() && subspace_distance(a, b) <= tolerance;
}

/// Orthonormal basis of the orthogonal complement.
template <typename Scalar>
Subspace<Scalar> orthogonal_complement(const Subspace<Scalar>& w) {
  const Eigen::Index n = w.ambient_dim();
  Eigen::HouseholderQR<Mat<Scalar>> qr(w.basis());
  const Mat<Scalar> q = qr.householderQ() * Mat<Scalar>::Identity(n, n);
  return Subspace<Scalar>::span(q.rightCols(n - w.dim()));
}

/// sigma_min of the stacked bases [U | V]; positive iff U + V is direct.
template <typename Scalar>
RealOf<Scalar> direct_sum_margin(const Subspace<Scalar>& u, const Subspace<Scalar>& v) {
  require(u.ambient_dim() == v.ambient_dim(), ErrorKind::DimensionMismatch, "subspaces live in different spaces");
  Mat<Scalar> stacked(u.ambient_dim(), u.dim() + v.dim());
  stacked << u.basis(), v.basis();
  const auto sv = singular_values(stacked);
  if (stacked.cols() > stacked.rows()) return 0;
  return sv(sv.size() - 1);
}

/// U (+) V equals the ambient space with margin above the direct-sum threshold.
template <typename Scalar>
bool complementary(const Subspace<Scalar>& u, const Subspace<Scalar>& v) {
  return u.ambient_dim() == v.ambient_dim() && u.dim() + v.dim() == u.ambient_dim() &&
         direct_sum_margin(u, v) > tol::kDirectSum;
}

template <typename Scalar>
class Polarization {
 public:
  using Matrix = Mat<Scalar>;

  /// Throws NotPolarization unless horizontal (+) vertical is the ambient space.
  static Polarization make(Subspace<Scalar> horizontal, Subspace<Scalar> vertical) {
    require(complementary(horizontal, vertical), ErrorKind::NotPolarization,
            "horizontal and vertical subspaces are not complementary");
    return Polarization(std::move(horizontal), std::move(vertical));
  }

  /// First k coordinate axes against the remaining n - k.
  static Polarization standard(Eigen::Index n, Eigen::Index k) {
    const Matrix id = Matrix::Identity(n, n);
    return Polarization(Subspace<Scalar>::span(id.leftCols(k)), Subspace<Scalar>::span(id.rightCols(n - k)));
  }

  const Subspace<Scalar>& horizontal() const { return horizontal_; }
  const Subspace<Scalar>& vertical() const { return vertical_; }
  Eigen::Index ambient_dim() const { return horizontal_.ambient_dim(); }

  /// [horizontal basis | vertical basis]; coordinates of a vector in this
  /// frame split as (horizontal part, vertical part).
  Matrix frame() const {
    Matrix f(ambient_dim(), ambient_dim());
    f << horizontal_.basis(), vertical_.basis();
    return f;
  }

  /// Same decomposition with the roles of the summands exchanged.
  Polarization swapped() const { return Polarization(vertical_, horizontal_); }

 private:
  Polarization(Subspace<Scalar> h, Subspace<Scalar> v) : horizontal_(std::move(h)), vertical_(std::move(v)) {}
  Subspace<Scalar> horizontal_;
  Subspace<Scalar> vertical_;
};

/// Matrix of the projection onto `onto` parallel to `along`.
template <typename Scalar>
Mat<Scalar> parallel_projector(const Subspace<Scalar>& onto, const Subspace<Scalar>& along) {
  require(complementary(onto, along), ErrorKind::NotComplementary,
          "projection target and kernel are not complementary");
  const Eigen::Index n = onto.ambient_dim();
  Mat<Scalar> f(n, n);
  f << onto.basis(), along.basis();
  const Mat<Scalar> coeffs = solve(f, Mat<Scalar>::Identity(n, n));
  return onto.basis() * coeffs.topRows(onto.dim());
}

/// The unique y in `onto` with x - y in `along`. Accepts a single vector or a
/// block of column vectors.
template <typename Scalar, typename Derived>
Mat<Scalar> project_parallel(const Eigen::MatrixBase<Derived>& x, const Subspace<Scalar>& onto,
                             const Subspace<Scalar>& along) {
  require(complementary(onto, along), ErrorKind::NotComplementary,
          "projection target and kernel are not complementary");
  require(x.rows() == onto.ambient_dim(), ErrorKind::DimensionMismatch, "project_parallel: vector size");
  const Eigen::Index n = onto.ambient_dim();
  Mat<Scalar> f(n, n);
  f << onto.basis(), along.basis();
  const Mat<Scalar> coeffs = solve(f, x.template cast<Scalar>());
  return onto.basis() * coeffs.topRows(onto.dim());
}

namespace detail {

template <typename Scalar>
bool chart_invertible(const Mat<Scalar>& x) {
  if (x.rows() != x.cols() || x.size() == 0) return false;
  const auto sv = singular_values(x);
  return sv(sv.size() - 1) >= tol::kSingular * std::max<RealOf<Scalar>>(sv(0), 1);
}

}  // namespace detail

/// Graph coordinate T of W relative to `pol`: W = {h + V T h : h in horizontal},
/// with T expressed from horizontal-basis to vertical-basis coordinates.
/// Throws OutsideChart when W does not project isomorphically onto the
/// horizontal summand.
template <typename Scalar>
Mat<Scalar> graph_coordinate(const Subspace<Scalar>& w, const Polarization<Scalar>& pol) {
  require(w.ambient_dim() == pol.ambient_dim() && w.dim() == pol.horizontal().dim(),
          ErrorKind::DimensionMismatch, "graph_coordinate: subspace shape does not match the polarization");
  const Eigen::Index k = w.dim();
  const Mat<Scalar> coords = solve(pol.frame(), w.basis());
  const Mat<Scalar> x = coords.topRows(k);
  const Mat<Scalar> y = coords.bottomRows(pol.ambient_dim() - k);
  require(detail::chart_invertible(x), ErrorKind::OutsideChart, "subspace is outside the big cell of this polarization");
  return solve_right(y, x);
}

template <typename Scalar, typename Derived>
Subspace<Scalar> subspace_from_graph(const Eigen::MatrixBase<Derived>& t, const Polarization<Scalar>& pol) {
  require(t.rows() == pol.vertical().dim() && t.cols() == pol.horizontal().dim(), ErrorKind::DimensionMismatch,
          "subspace_from_graph: coordinate shape does not match the polarization");
  const Mat<Scalar> tm = t.template cast<Scalar>();
  require_finite(tm, "graph coordinate");
  return Subspace<Scalar>::span(pol.horizontal().basis() + pol.vertical().basis() * tm);
}

/// Invertible n x n matrix in 2x2 block form relative to a polarization with
/// horizontal dimension k: a is k x k, b is k x (n-k), c is (n-k) x k.
template <typename Scalar>
class BlockMobius {
 public:
  using Matrix = Mat<Scalar>;

  static BlockMobius from_matrix(const Matrix& g, Eigen::Index k) {
    require_square(g, "block Mobius transform");
    require(k >= 1 && k < g.rows(), ErrorKind::DimensionMismatch, "block split out of range");
    require_finite(g, "block Mobius transform");
    require(inverse_condition(g) > 1e-10, ErrorKind::Singular, "block Mobius transform is not invertible");
    const Eigen::Index m = g.rows() - k;
    return BlockMobius(g.topLeftCorner(k, k), g.topRightCorner(k, m), g.bottomLeftCorner(m, k),
                       g.bottomRightCorner(m, m));
  }

  static BlockMobius make(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
    require(a.rows() == a.cols() && d.rows() == d.cols() && b.rows() == a.rows() && b.cols() == d.cols() &&
                c.rows() == d.rows() && c.cols() == a.cols(),
            ErrorKind::DimensionMismatch, "inconsistent Mobius block shapes");
    Matrix g(a.rows() + d.rows(), a.cols() + d.cols());
    g << a, b, c, d;
    return from_matrix(g, a.rows());
  }

  static BlockMobius identity(Eigen::Index n, Eigen::Index k) { return from_matrix(Matrix::Identity(n, n), k); }

  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  const Matrix& c() const { return c_; }
  const Matrix& d() const { return d_; }
  Eigen::Index horizontal_dim() const { return a_.rows(); }
  Eigen::Index ambient_dim() const { return a_.rows() + d_.rows(); }

  Matrix assembled() const {
    Matrix g(ambient_dim(), ambient_dim());
    g << a_, b_, c_, d_;
    return g;
  }

  /// The same linear map written in ambient coordinates, given the frame the
  /// blocks refer to.
  Matrix ambient(const Polarization<Scalar>& pol) const {
    const Matrix f = pol.frame();
    return solve_right(f * assembled(), f);
  }

 private:
  BlockMobius(Matrix a, Matrix b, Matrix c, Matrix d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}
  Matrix a_, b_, c_, d_;
};

template <typename Scalar>
BlockMobius<Scalar> compose(const BlockMobius<Scalar>& g1, const BlockMobius<Scalar>& g2) {
  return BlockMobius<Scalar>::from_matrix(g1.assembled() * g2.assembled(), g1.horizontal_dim());
}

/// (c + dT)(a + bT)^{-1}. Throws OutsideChart when a + bT is singular.
template <typename Scalar, typename Derived>
Mat<Scalar> mobius_apply_coordinate(const BlockMobius<Scalar>& g, const Eigen::MatrixBase<Derived>& t) {
  require(t.rows() == g.d().rows() && t.cols() == g.a().cols(), ErrorKind::DimensionMismatch,
          "mobius_apply_coordinate: coordinate shape");
  const Mat<Scalar> lhs = g.a() + g.b() * t;
  const Mat<Scalar> rhs = g.c() + g.d() * t;
  require(detail::chart_invertible(lhs), ErrorKind::OutsideChart, "Mobius image leaves the big cell");
  return solve_right(rhs, lhs);
}

/// Image of W under g, with g's blocks read relative to `pol`.
template <typename Scalar>
Subspace<Scalar> mobius_apply_subspace(const BlockMobius<Scalar>& g, const Subspace<Scalar>& w,
                                       const Polarization<Scalar>& pol) {
  require(w.ambient_dim() == g.ambient_dim(), ErrorKind::DimensionMismatch, "mobius_apply_subspace: ambient size");
  return Subspace<Scalar>::span(g.ambient(pol) * w.basis());
}

/// Image of W under g, blocks read relative to the standard coordinate split.
template <typename Scalar>
Subspace<Scalar> mobius_apply_subspace(const BlockMobius<Scalar>& g, const Subspace<Scalar>& w) {
  require(w.ambient_dim() == g.ambient_dim(), ErrorKind::DimensionMismatch, "mobius_apply_subspace: ambient size");
  return Subspace<Scalar>::span(g.assembled() * w.basis());
}

/// Image of W under an arbitrary invertible ambient matrix.
template <typename Scalar, typename Derived>
Subspace<Scalar> transform(const Eigen::MatrixBase<Derived>& g, const Subspace<Scalar>& w) {
  require(g.cols() == w.ambient_dim() && g.rows() == g.cols(), ErrorKind::DimensionMismatch, "transform: shape");
  return Subspace<Scalar>::span(g * w.basis());
}

/// Principal angles in ascending order, min(dim1, dim2) of them.
///
/// Large angles come from the cosines (singular values of B1^* B2); angles
/// below pi/4 are taken from the sines, which keeps small angles accurate.
template <typename Scalar>
Eigen::Matrix<RealOf<Scalar>, Eigen::Dynamic, 1> principal_angles(const Subspace<Scalar>& w1,
                                                                 const Subspace<Scalar>& w2) {
  using Real = RealOf<Scalar>;
  require(w1.ambient_dim() == w2.ambient_dim(), ErrorKind::DimensionMismatch, "principal_angles: ambient size");
  const Subspace<Scalar>& small = w1.dim() <= w2.dim() ? w1 : w2;
  const Subspace<Scalar>& large = w1.dim() <= w2.dim() ? w2 : w1;
  const Eigen::Index m = small.dim();
  const auto cosines = singular_values((large.basis().adjoint() * small.basis()).eval());
  const Mat<Scalar> residual = small.basis() - large.basis() * (large.basis().adjoint() * small.basis());
  auto sines = singular_values(residual);  // descending
  Eigen::Matrix<Real, Eigen::Dynamic, 1> angles(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Real c = std::min<Real>(cosines(i), 1);
    const Real s = std::min<Real>(sines(m - 1 - i), 1);
    angles(i) = c * c >= Real(0.5) ? std::asin(s) : std::acos(c);
  }
  std::sort(angles.data(), angles.data() + m);
  return angles;
}

template <typename Scalar = double>
Subspace<Scalar> random_subspace(Eigen::Index n, Eigen::Index k, Rng& rng) {
  require(k >= 1 && k < n, ErrorKind::DimensionMismatch, "random_subspace: need 1 <= k < n");
  return Subspace<Scalar>::span(gaussian_matrix<Scalar>(n, k, rng));
}

/// Deterministic in the seed.
template <typename Scalar = double>
Subspace<Scalar> random_subspace(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  Rng rng(seed);
  return random_subspace<Scalar>(n, k, rng);
}

}  // namespace opcross

#endif  // OPCROSS_GRASSMANN_HPP
