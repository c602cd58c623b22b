#include "swe/spaces.hpp"

#include <cmath>

namespace swe {

namespace {

TriangleGeometry<double> triangle_geometry(const Mesh& mesh, int t) {
  Eigen::Matrix<double, 3, 2> v;
  for (int i = 0; i < 3; ++i) v.row(i) = mesh.vertices()[mesh.triangles()[t][i]].transpose();
  return TriangleGeometry<double>::from_vertices(v);
}

template <class Integrand>
double integrate_squared(const Mesh& mesh, int degree, Integrand&& squared_at) {
  const auto rule = QuadratureRule<double>::collapsed_gauss(degree);
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto geo = triangle_geometry(mesh, t);
    double local = 0.0;
    for (Eigen::Index q = 0; q < rule.size(); ++q)
      local += rule.weights(q) * squared_at(t, geo, Eigen::Vector3d(rule.barycentric.row(q).transpose()));
    sum += 2.0 * geo.area * local;
  }
  return std::sqrt(sum);
}

}  // namespace

P2ScalarSpace::P2ScalarSpace(std::shared_ptr<const Mesh> mesh) : mesh_(std::move(mesh)) {
  const Mesh& m = *mesh_;
  const int nv = m.num_vertices();
  num_dofs_ = nv + m.num_edges();
  dofs_.resize(m.num_triangles());
  for (int t = 0; t < m.num_triangles(); ++t) {
    for (int i = 0; i < 3; ++i) {
      dofs_[t][i] = m.triangles()[t][i];
      dofs_[t][3 + i] = nv + m.triangle_edge(t, i);
    }
  }
  nodes_ = m.vertices();
  nodes_.reserve(num_dofs_);
  for (int e = 0; e < m.num_edges(); ++e) nodes_.push_back(m.edge_midpoint(e));
  boundary_.assign(num_dofs_, 0);
  for (int v = 0; v < nv; ++v) boundary_[v] = m.is_boundary_vertex(v);
  for (const auto& be : m.boundary_edges()) boundary_[nv + be.edge] = 1;
}

TriangleGeometry<double> P2ScalarSpace::geometry(int t) const { return triangle_geometry(*mesh_, t); }
TriangleGeometry<double> P1DGVectorSpace::geometry(int t) const { return triangle_geometry(*mesh_, t); }

ScalarField interpolate_scalar(std::shared_ptr<const P2ScalarSpace> space, const ScalarFunction& f) {
  Eigen::VectorXd c(space->num_dofs());
  const auto& nodes = space->node_coordinates();
  for (int d = 0; d < space->num_dofs(); ++d) c(d) = f(nodes[d]);
  return ScalarField(std::move(space), std::move(c));
}

VectorField interpolate_vector(std::shared_ptr<const P1DGVectorSpace> space, const VectorFunction& f) {
  const Mesh& mesh = space->mesh();
  Eigen::VectorXd c(space->num_dofs());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector2d value = f(mesh.vertices()[mesh.triangles()[t][i]]);
      c(P1DGVectorSpace::dof(t, 0, i)) = value.x();
      c(P1DGVectorSpace::dof(t, 1, i)) = value.y();
    }
  }
  return VectorField(std::move(space), std::move(c));
}

double evaluate(const ScalarField& field, int t, const Eigen::Vector3d& l) {
  const auto phi = p2_values(l);
  const auto& dofs = field.space().dofs(t);
  double value = 0.0;
  for (int a = 0; a < 6; ++a) value += phi(a) * field.coefficients()(dofs[a]);
  return value;
}

Eigen::Vector2d evaluate(const VectorField& field, int t, const Eigen::Vector3d& l) {
  const auto block = field.coefficients().segment<6>(P1DGVectorSpace::block_size * t);
  return {l.dot(block.head<3>()), l.dot(block.tail<3>())};
}

double l2_norm(const ScalarField& field, int degree) {
  return integrate_squared(field.space().mesh(), degree, [&](int t, const auto&, const Eigen::Vector3d& l) {
    const double v = evaluate(field, t, l);
    return v * v;
  });
}

double l2_norm(const VectorField& field, int degree) {
  return integrate_squared(field.space().mesh(), degree, [&](int t, const auto&, const Eigen::Vector3d& l) {
    return evaluate(field, t, l).squaredNorm();
  });
}

double l2_error(const ScalarField& field, const ScalarFunction& exact, int degree) {
  return integrate_squared(field.space().mesh(), degree,
                           [&](int t, const TriangleGeometry<double>& geo, const Eigen::Vector3d& l) {
                             const double d = evaluate(field, t, l) - exact(geo.point(l));
                             return d * d;
                           });
}

double l2_error(const VectorField& field, const VectorFunction& exact, int degree) {
  return integrate_squared(field.space().mesh(), degree,
                           [&](int t, const TriangleGeometry<double>& geo, const Eigen::Vector3d& l) {
                             return (evaluate(field, t, l) - exact(geo.point(l))).squaredNorm();
                           });
}

}  // namespace swe
