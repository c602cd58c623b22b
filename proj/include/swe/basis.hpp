#pragma once

#include "swe/quadrature.hpp"

#include <Eigen/Core>

#include <array>

namespace swe {

// Local P2 ordering: vertex nodes 0, 1, 2, then the midpoints of the edges
// opposite vertices 0, 1, 2. With barycentrics l:
//   phi_i     = l_i (2 l_i - 1)         i = 0, 1, 2
//   phi_{3+i} = 4 l_j l_k               {j, k} = {0, 1, 2} \ {i}
//
// The P1 nodal basis of the DG velocity space is l_0, l_1, l_2.

template <class Scalar>
Eigen::Matrix<Scalar, 6, 1> p2_values(const Eigen::Matrix<Scalar, 3, 1>& l) {
  Eigen::Matrix<Scalar, 6, 1> v;
  for (int i = 0; i < 3; ++i) v(i) = l(i) * (Scalar(2) * l(i) - Scalar(1));
  v(3) = Scalar(4) * l(1) * l(2);
  v(4) = Scalar(4) * l(2) * l(0);
  v(5) = Scalar(4) * l(0) * l(1);
  return v;
}

/// Derivatives d phi_a / d l_b, one row per basis function.
template <class Scalar>
Eigen::Matrix<Scalar, 6, 3> p2_barycentric_derivatives(const Eigen::Matrix<Scalar, 3, 1>& l) {
  Eigen::Matrix<Scalar, 6, 3> d = Eigen::Matrix<Scalar, 6, 3>::Zero();
  for (int i = 0; i < 3; ++i) d(i, i) = Scalar(4) * l(i) - Scalar(1);
  d(3, 1) = Scalar(4) * l(2);
  d(3, 2) = Scalar(4) * l(1);
  d(4, 2) = Scalar(4) * l(0);
  d(4, 0) = Scalar(4) * l(2);
  d(5, 0) = Scalar(4) * l(1);
  d(5, 1) = Scalar(4) * l(0);
  return d;
}

/// Barycentric coordinates of the six P2 nodes.
template <class Scalar = double>
Eigen::Matrix<Scalar, 6, 3> p2_nodes() {
  Eigen::Matrix<Scalar, 6, 3> n;
  const Scalar h = Scalar(1) / Scalar(2);
  n << 1, 0, 0,  //
      0, 1, 0,   //
      0, 0, 1,   //
      0, h, h,   //
      h, 0, h,   //
      h, h, 0;
  return n;
}

/// P2 values and reference gradients (d/dxi, d/deta) at every point of a rule.
template <class Scalar = double>
struct P2Tabulation {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 6> values;
  std::array<Eigen::Matrix<Scalar, Eigen::Dynamic, 6>, 2> gradients;
};

template <class Scalar>
P2Tabulation<Scalar> tabulate_p2_basis(const QuadratureRule<Scalar>& rule) {
  // d l / d(xi, eta): l0 = 1 - xi - eta, l1 = xi, l2 = eta.
  Eigen::Matrix<Scalar, 3, 2> dl;
  dl << -1, -1, 1, 0, 0, 1;
  P2Tabulation<Scalar> tab;
  const auto nq = rule.size();
  tab.values.resize(nq, 6);
  tab.gradients[0].resize(nq, 6);
  tab.gradients[1].resize(nq, 6);
  for (Eigen::Index q = 0; q < nq; ++q) {
    const Eigen::Matrix<Scalar, 3, 1> l = rule.barycentric.row(q).transpose();
    tab.values.row(q) = p2_values(l).transpose();
    const Eigen::Matrix<Scalar, 6, 2> g = p2_barycentric_derivatives(l) * dl;
    tab.gradients[0].row(q) = g.col(0).transpose();
    tab.gradients[1].row(q) = g.col(1).transpose();
  }
  return tab;
}

/// Affine map data of one physical triangle.
template <class Scalar = double>
struct TriangleGeometry {
  Scalar area;
  /// Row i holds the physical gradient of barycentric l_i.
  Eigen::Matrix<Scalar, 3, 2> grad_l;
  Eigen::Matrix<Scalar, 3, 2> vertices;

  static TriangleGeometry from_vertices(const Eigen::Matrix<Scalar, 3, 2>& v) {
    TriangleGeometry g;
    g.vertices = v;
    const Scalar x10 = v(1, 0) - v(0, 0), y10 = v(1, 1) - v(0, 1);
    const Scalar x20 = v(2, 0) - v(0, 0), y20 = v(2, 1) - v(0, 1);
    const Scalar det = x10 * y20 - x20 * y10;
    g.area = det / Scalar(2);
    g.grad_l(1, 0) = y20 / det;
    g.grad_l(1, 1) = -x20 / det;
    g.grad_l(2, 0) = -y10 / det;
    g.grad_l(2, 1) = x10 / det;
    g.grad_l.row(0) = -g.grad_l.row(1) - g.grad_l.row(2);
    return g;
  }

  Eigen::Matrix<Scalar, 2, 1> point(const Eigen::Matrix<Scalar, 3, 1>& l) const {
    return vertices.transpose() * l;
  }

  /// Physical gradients of the six P2 functions at barycentric point l (6 x 2).
  Eigen::Matrix<Scalar, 6, 2> p2_gradients(const Eigen::Matrix<Scalar, 3, 1>& l) const {
    return p2_barycentric_derivatives(l) * grad_l;
  }
};

}  // namespace swe
