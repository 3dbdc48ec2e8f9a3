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

// Operator cross-ratio of four subspaces and the objects built from it.
//
// The cross-ratio DV(P1,P2;P3,P4) is the composite map
//
//     P1 --(along P4)--> P3 --(along P2)--> P1
//
// of two oblique projections. dv_composition builds it literally and is the
// reference; dv_matrix and dv_mixed evaluate the closed forms in one or two
// graph charts. Matrices in different bases are only similar, so results are
// compared through spectra and trace powers.

#ifndef OPCROSS_CROSSRATIO_HPP
#define OPCROSS_CROSSRATIO_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "opcross/grassmann.hpp"
#include "opcross/numerics.hpp"

namespace opcross {

/// Basis in which a CrossRatioResult matrix is written.
enum class Carrier {
  FirstOrthonormal,  // stored orthonormal basis of the first subspace
  FirstChart,        // horizontal coordinates of the first subspace's graph
  ReducedFirst,      // orthonormal basis of the first subspace cut down to the generic sum
};

constexpr std::string_view to_string(Carrier c) {
  switch (c) {
    case Carrier::FirstOrthonormal: return "first-orthonormal";
    case Carrier::FirstChart: return "first-chart";
    case Carrier::ReducedFirst: return "reduced-first";
  }
  return "unknown";
}

template <typename Scalar>
struct CrossRatioResult {
  Mat<Scalar> matrix;
  Carrier carrier = Carrier::FirstOrthonormal;
  Spectrum<RealOf<Scalar>> spectrum;
  std::vector<Scalar> trace_powers;  // tr(D^k), k = 1..K
  Scalar determinant{};
};

/// Packs a square operator with its spectrum, tr(D^k) for k <= kmax and its
/// determinant. kmax < 0 selects the matrix dimension.
template <typename Scalar>
CrossRatioResult<Scalar> make_cross_ratio_result(Mat<Scalar> m, Carrier carrier, int kmax = -1) {
  require_square(m, "cross-ratio operator");
  CrossRatioResult<Scalar> r;
  r.spectrum = eigenvalues(m);
  r.trace_powers = trace_powers(m, kmax < 0 ? static_cast<int>(m.rows()) : kmax);
  r.determinant = m.determinant();
  r.matrix = std::move(m);
  r.carrier = carrier;
  return r;
}

namespace detail {

template <typename Scalar>
void require_polarization(const Subspace<Scalar>& a, const Subspace<Scalar>& b, const char* what) {
  require(complementary(a, b), ErrorKind::NotPolarization, std::string(what) + " is not a polarization");
}

}  // namespace detail

/// DV(P1,P2;P3,P4) as the composite of project_parallel maps, written in the
/// orthonormal basis of P1. Requires P1 (+) P2 = P3 (+) P4 = ambient and
/// dim P1 = dim P3.
template <typename Scalar>
CrossRatioResult<Scalar> dv_composition(const Subspace<Scalar>& p1, const Subspace<Scalar>& p2,
                                        const Subspace<Scalar>& p3, const Subspace<Scalar>& p4) {
  detail::require_polarization(p1, p2, "(P1, P2)");
  detail::require_polarization(p3, p4, "(P3, P4)");
  require(p1.dim() == p3.dim(), ErrorKind::DimensionMismatch, "dv_composition: dim P1 must equal dim P3");
  const Mat<Scalar> onto3 = project_parallel(p1.basis(), p3, p4);
  const Mat<Scalar> back1 = project_parallel(onto3, p1, p2);
  return make_cross_ratio_result<Scalar>(p1.basis().adjoint() * back1, Carrier::FirstOrthonormal);
}

/// (T1 - T2)^{-1} (T2 - T3) (T3 - T4)^{-1} (T4 - T1) for half-dimensional
/// chart coordinates relative to `pol`.
template <typename Scalar>
CrossRatioResult<Scalar> dv_matrix(const Mat<Scalar>& t1, const Mat<Scalar>& t2, const Mat<Scalar>& t3,
                                   const Mat<Scalar>& t4, const Polarization<Scalar>& pol) {
  const Eigen::Index k = pol.horizontal().dim();
  require(pol.vertical().dim() == k, ErrorKind::DimensionMismatch, "dv_matrix needs a half-dimensional polarization");
  for (const Mat<Scalar>* t : {&t1, &t2, &t3, &t4})
    require(t->rows() == k && t->cols() == k, ErrorKind::DimensionMismatch, "dv_matrix: coordinate shape");
  const Mat<Scalar> right = solve((t3 - t4).eval(), (t4 - t1).eval());
  const Mat<Scalar> left = solve((t1 - t2).eval(), ((t2 - t3) * right).eval());
  return make_cross_ratio_result<Scalar>(left, Carrier::FirstChart);
}

/// Mixed-chart form: P1, P3 are coordinates in the chart of the polarization,
/// P2, P4 in the swapped chart (vertical -> horizontal). Evaluates
/// (P2 P1 - I)^{-1} (P2 P3 - I) (P4 P3 - I)^{-1} (P4 P1 - I).
template <typename Scalar>
CrossRatioResult<Scalar> dv_mixed(const Mat<Scalar>& p1, const Mat<Scalar>& p2, const Mat<Scalar>& p3,
                                  const Mat<Scalar>& p4) {
  require(p1.rows() == p3.rows() && p1.cols() == p3.cols() && p2.rows() == p1.cols() && p2.cols() == p1.rows() &&
              p4.rows() == p2.rows() && p4.cols() == p2.cols(),
          ErrorKind::DimensionMismatch, "dv_mixed: inconsistent chart coordinate shapes");
  const Mat<Scalar> id = Mat<Scalar>::Identity(p1.cols(), p1.cols());
  const Mat<Scalar> right = solve((p4 * p3 - id).eval(), (p4 * p1 - id).eval());
  const Mat<Scalar> left = solve((p2 * p1 - id).eval(), ((p2 * p3 - id) * right).eval());
  return make_cross_ratio_result<Scalar>(left, Carrier::FirstChart);
}

/// Reorderings of (P1,P2;P3,P4) that keep P1 in front, one per value of the
/// cross-ratio under the permutation group. The composite on P1 transforms as
///   12;34 -> D            12;43 -> I - D           14;32 -> D^{-1}
///   13;42 -> (I - D)^{-1} 13;24 -> (I - D^{-1})^{-1} 14;23 -> I - D^{-1}
enum class ArgumentOrder { o12_34, o12_43, o14_32, o13_42, o13_24, o14_23 };

inline constexpr std::array<ArgumentOrder, 6> kAllArgumentOrders = {
    ArgumentOrder::o12_34, ArgumentOrder::o12_43, ArgumentOrder::o14_32,
    ArgumentOrder::o13_42, ArgumentOrder::o13_24, ArgumentOrder::o14_23};

constexpr std::string_view to_string(ArgumentOrder o) {
  switch (o) {
    case ArgumentOrder::o12_34: return "12;34";
    case ArgumentOrder::o12_43: return "12;43";
    case ArgumentOrder::o14_32: return "14;32";
    case ArgumentOrder::o13_42: return "13;42";
    case ArgumentOrder::o13_24: return "13;24";
    case ArgumentOrder::o14_23: return "14;23";
  }
  return "?";
}

/// Accepts "12;34", "{12,34}", "1234" and the like. "34;12" is the identity
/// class. Throws Validation for any other ordering.
inline ArgumentOrder parse_argument_order(std::string_view label) {
  std::string digits;
  for (char ch : label)
    if (ch >= '1' && ch <= '4') digits.push_back(ch);
    else if (ch != ';' && ch != ',' && ch != '{' && ch != '}' && ch != ' ' && ch != '|')
      raise(ErrorKind::Validation, "bad argument order label '" + std::string(label) + "'");
  if (digits == "1234" || digits == "3412") return ArgumentOrder::o12_34;
  if (digits == "1243") return ArgumentOrder::o12_43;
  if (digits == "1432") return ArgumentOrder::o14_32;
  if (digits == "1342") return ArgumentOrder::o13_42;
  if (digits == "1324") return ArgumentOrder::o13_24;
  if (digits == "1423") return ArgumentOrder::o14_23;
  raise(ErrorKind::Validation, "unsupported argument order '" + std::string(label) + "'");
}

/// Zero-based positions of (P1,P2,P3,P4) in the reordered argument list.
constexpr std::array<int, 4> argument_indices(ArgumentOrder o) {
  switch (o) {
    case ArgumentOrder::o12_34: return {0, 1, 2, 3};
    case ArgumentOrder::o12_43: return {0, 1, 3, 2};
    case ArgumentOrder::o14_32: return {0, 3, 2, 1};
    case ArgumentOrder::o13_42: return {0, 2, 3, 1};
    case ArgumentOrder::o13_24: return {0, 2, 1, 3};
    case ArgumentOrder::o14_23: return {0, 3, 1, 2};
  }
  return {0, 1, 2, 3};
}

/// Value of the cross-ratio for a reordered argument list, from the base value.
template <typename Scalar>
CrossRatioResult<Scalar> dv_permuted(const CrossRatioResult<Scalar>& base, ArgumentOrder order) {
  const Mat<Scalar>& d = base.matrix;
  require_square(d, "dv_permuted: operator");
  const Mat<Scalar> id = Mat<Scalar>::Identity(d.rows(), d.rows());
  Mat<Scalar> out;
  switch (order) {
    case ArgumentOrder::o12_34: out = d; break;
    case ArgumentOrder::o12_43: out = id - d; break;
    case ArgumentOrder::o14_32: out = inverse(d); break;
    case ArgumentOrder::o13_42: out = inverse((id - d).eval()); break;
    case ArgumentOrder::o13_24: out = inverse((id - inverse(d)).eval()); break;
    case ArgumentOrder::o14_23: out = id - inverse(d); break;
  }
  return make_cross_ratio_result<Scalar>(std::move(out), base.carrier,
                                         static_cast<int>(base.trace_powers.size()));
}

namespace detail {

// X intersected with span(q), q orthonormal; the intersection must have
// exactly `expected` dimensions.
template <typename Scalar>
Mat<Scalar> intersect_with(const Subspace<Scalar>& x, const Mat<Scalar>& q, Eigen::Index expected) {
  const Mat<Scalar> off = x.basis() - q * (q.adjoint() * x.basis());
  return x.basis() * null_space(off, expected, tol::kDirectSum);
}

}  // namespace detail

/// Cross-ratio for polarizations with dim P1 = dim P3 != dim P2 = dim P4.
///
/// The pair of smaller subspaces spans a space S of twice their dimension;
/// the larger subspaces meet S generically in subspaces of that same
/// dimension. The cross-ratio of the four traces inside S is returned, so
/// the result always has size min(dim P1, dim P2). When dim P1 > dim P2 this
/// drops the part P1 intersect P3, where the full composite is the identity.
/// Throws DegeneratePosition when the intersections are not generic.
template <typename Scalar>
CrossRatioResult<Scalar> dv_unequal(const Subspace<Scalar>& p1, const Subspace<Scalar>& p2,
                                    const Subspace<Scalar>& p3, const Subspace<Scalar>& p4) {
  detail::require_polarization(p1, p2, "(P1, P2)");
  detail::require_polarization(p3, p4, "(P3, P4)");
  require(p1.dim() == p3.dim(), ErrorKind::DimensionMismatch, "dv_unequal: dim P1 must equal dim P3");
  if (p1.dim() == p2.dim()) return dv_composition(p1, p2, p3, p4);

  const bool first_small = p1.dim() < p2.dim();
  const Subspace<Scalar>& sa = first_small ? p1 : p2;
  const Subspace<Scalar>& sb = first_small ? p3 : p4;
  const Eigen::Index m = sa.dim();
  require(direct_sum_margin(sa, sb) > tol::kDirectSum, ErrorKind::DegeneratePosition,
          "the smaller subspaces do not span a space of twice their dimension");
  Mat<Scalar> stacked(sa.ambient_dim(), 2 * m);
  stacked << sa.basis(), sb.basis();
  const Mat<Scalar> q = Subspace<Scalar>::span(stacked).basis();

  auto reduce = [&](const Mat<Scalar>& basis) { return Subspace<Scalar>::span((q.adjoint() * basis).eval()); };
  std::array<Mat<Scalar>, 4> cut;
  const std::array<const Subspace<Scalar>*, 4> ps = {&p1, &p2, &p3, &p4};
  for (int i = 0; i < 4; ++i) {
    const bool in_sum = (ps[i]->dim() == m);
    cut[i] = in_sum ? ps[i]->basis() : detail::intersect_with(*ps[i], q, m);
  }
  auto r = dv_composition(reduce(cut[0]), reduce(cut[1]), reduce(cut[2]), reduce(cut[3]));
  r.carrier = Carrier::ReducedFirst;
  return r;
}

/// The three cross-ratios of the cocycle identity, each written in the
/// orthonormal basis of P1:
///   DV(P1,Q1;P2,Q2), DV(P1,Q3;P2,Q1), DV(P1,Q2;P2,Q3).
template <typename Scalar>
std::array<CrossRatioResult<Scalar>, 3> cocycle_factors(const Subspace<Scalar>& p1, const Subspace<Scalar>& p2,
                                                        const Subspace<Scalar>& q1, const Subspace<Scalar>& q2,
                                                        const Subspace<Scalar>& q3) {
  return {dv_composition(p1, q1, p2, q2), dv_composition(p1, q3, p2, q1), dv_composition(p1, q2, p2, q3)};
}

/// The cocycle product taken in diagrammatic order (first factor applied
/// first), through the chain
///   P1 -Q2-> P2 -Q1-> P1 -Q1-> P2 -Q3-> P1 -Q3-> P2 -Q2-> P1,
/// where -Q-> is the projection parallel to Q. Equals the identity on P1 for
/// every admissible configuration; returned for residual inspection.
template <typename Scalar>
Mat<Scalar> cocycle_product(const Subspace<Scalar>& p1, const Subspace<Scalar>& p2, const Subspace<Scalar>& q1,
                            const Subspace<Scalar>& q2, const Subspace<Scalar>& q3) {
  require(p1.dim() == p2.dim(), ErrorKind::DimensionMismatch, "cocycle_product: dim P1 must equal dim P2");
  for (const Subspace<Scalar>* p : {&p1, &p2})
    for (const Subspace<Scalar>* q : {&q1, &q2, &q3}) detail::require_polarization(*p, *q, "(P_i, Q_j)");
  Mat<Scalar> x = p1.basis();
  x = project_parallel(x, p2, q2);
  x = project_parallel(x, p1, q1);
  x = project_parallel(x, p2, q1);
  x = project_parallel(x, p1, q3);
  x = project_parallel(x, p2, q3);
  x = project_parallel(x, p1, q2);
  return p1.basis().adjoint() * x;
}

/// (I + A^*A)^{-1} (I + A^*B) (I + B^*B)^{-1} (I + B^*A) for graph
/// coordinates A, B relative to an orthogonal polarization. Its eigenvalues
/// are the squared cosines of the principal angles between the graphs.
template <typename Scalar>
CrossRatioResult<Scalar> operator_angle(const Mat<Scalar>& a, const Mat<Scalar>& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::DimensionMismatch,
          "operator_angle: A and B must have the same shape");
  require_finite(a, "operator_angle: A");
  require_finite(b, "operator_angle: B");
  const Mat<Scalar> id = Mat<Scalar>::Identity(a.cols(), a.cols());
  const Eigen::LLT<Mat<Scalar>> gram_a(id + a.adjoint() * a);
  const Eigen::LLT<Mat<Scalar>> gram_b(id + b.adjoint() * b);
  const Mat<Scalar> right = gram_b.solve(id + b.adjoint() * a);
  const Mat<Scalar> m = gram_a.solve((id + a.adjoint() * b) * right);
  return make_cross_ratio_result<Scalar>(m, Carrier::FirstChart);
}

/// V and W are comparable (W = alpha V beta with alpha, beta unitary) iff
/// their singular values coincide.
template <typename Scalar>
bool comparable(const Mat<Scalar>& v, const Mat<Scalar>& w, double tolerance = tol::kDecision) {
  if (v.rows() != w.rows() || v.cols() != w.cols()) return false;
  if (v.size() == 0) return true;
  return (singular_values(v) - singular_values(w)).cwiseAbs().maxCoeff() <= tolerance;
}

template <typename Scalar>
struct ComparabilityWitness {
  Mat<Scalar> alpha;  // unitary, rows x rows
  Mat<Scalar> beta;   // unitary, cols x cols
};

/// Unitary alpha, beta with W = alpha V beta, recovered from the singular
/// value decompositions V = U1 S V1^*, W = U2 S V2^* as alpha = U2 U1^*,
/// beta = V1 V2^*. Empty when V and W are not comparable.
template <typename Scalar>
std::optional<ComparabilityWitness<Scalar>> comparability_witness(const Mat<Scalar>& v, const Mat<Scalar>& w,
                                                                  double tolerance = tol::kDecision) {
  if (!comparable(v, w, tolerance)) return std::nullopt;
  Eigen::JacobiSVD<Mat<Scalar>> sv(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::JacobiSVD<Mat<Scalar>> sw(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return ComparabilityWitness<Scalar>{sw.matrixU() * sv.matrixU().adjoint(), sv.matrixV() * sw.matrixV().adjoint()};
}

template <typename Real>
struct PairEquivalence {
  bool equivalent = false;
  Real angle_distance = 0;      // max |theta_i - phi_i| over principal angles
  bool chart_compared = false;  // both pairs in the standard big cell
  Real chart_distance = 0;      // spectral distance of the operator angles
};

/// Whether some unitary g maps (P, Q) onto (S, T). Principal angles decide;
/// when all four subspaces have the same dimension and lie in the standard
/// big cell the operator-angle spectra are compared as well.
template <typename Scalar>
PairEquivalence<RealOf<Scalar>> pair_equivalence(const Subspace<Scalar>& p, const Subspace<Scalar>& q,
                                                 const Subspace<Scalar>& s, const Subspace<Scalar>& t,
                                                 double tolerance = tol::kDecision) {
  using Real = RealOf<Scalar>;
  PairEquivalence<Real> out;
  if (p.ambient_dim() != s.ambient_dim() || q.ambient_dim() != t.ambient_dim() || p.dim() != s.dim() ||
      q.dim() != t.dim()) {
    out.angle_distance = std::numeric_limits<Real>::infinity();
    return out;
  }
  out.angle_distance = (principal_angles(p, q) - principal_angles(s, t)).cwiseAbs().maxCoeff();
  out.equivalent = out.angle_distance <= tolerance;

  const Eigen::Index k = p.dim();
  if (q.dim() == k) {
    const auto pol = Polarization<Scalar>::standard(p.ambient_dim(), k);
    try {
      const auto dpq = operator_angle(graph_coordinate(p, pol), graph_coordinate(q, pol));
      const auto dst = operator_angle(graph_coordinate(s, pol), graph_coordinate(t, pol));
      out.chart_compared = true;
      out.chart_distance = spectral_distance(dpq.spectrum, dst.spectrum);
      out.equivalent = out.equivalent && out.chart_distance <= tolerance;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OutsideChart) throw;
    }
  }
  return out;
}

template <typename Scalar>
bool pair_equivalent(const Subspace<Scalar>& p, const Subspace<Scalar>& q, const Subspace<Scalar>& s,
                     const Subspace<Scalar>& t, double tolerance = tol::kDecision) {
  return pair_equivalence(p, q, s, t, tolerance).equivalent;
}

}  // namespace opcross

#endif  // OPCROSS_CROSSRATIO_HPP
