#pragma once

#include "swe/basis.hpp"
#include "swe/mesh.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>

namespace swe {

using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Eigen::Vector2d(const Point&)>;

/**
 * Continuous piecewise-quadratic scalar space.
 *
 * Global dofs: vertices first (dof = vertex id), then edge midpoints
 * (dof = num_vertices + edge id). Local order per triangle follows basis.hpp.
 */
class P2ScalarSpace {
 public:
  explicit P2ScalarSpace(std::shared_ptr<const Mesh> mesh);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  int num_dofs() const { return num_dofs_; }
  const std::array<int, 6>& dofs(int t) const { return dofs_[t]; }
  const std::vector<Point>& node_coordinates() const { return nodes_; }
  /// True for boundary vertices and the midpoints of boundary edges.
  bool is_boundary_dof(int d) const { return boundary_[d] != 0; }
  TriangleGeometry<double> geometry(int t) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  int num_dofs_;
  std::vector<std::array<int, 6>> dofs_;
  std::vector<Point> nodes_;
  std::vector<std::uint8_t> boundary_;
};

/**
 * Discontinuous piecewise-linear vector space.
 *
 * Each triangle owns six consecutive dofs: x-component at its local vertices
 * 0..2, then y-component at local vertices 0..2.
 */
class P1DGVectorSpace {
 public:
  static constexpr int block_size = 6;

  explicit P1DGVectorSpace(std::shared_ptr<const Mesh> mesh) : mesh_(std::move(mesh)) {}

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  int num_dofs() const { return block_size * mesh_->num_triangles(); }
  static int dof(int t, int component, int node) { return block_size * t + 3 * component + node; }
  TriangleGeometry<double> geometry(int t) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
};

/// Coefficient vector bound to the space it lives in.
template <class Space>
class Field {
 public:
  Field(std::shared_ptr<const Space> space, Eigen::VectorXd coefficients)
      : space_(std::move(space)), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != space_->num_dofs())
      throw std::invalid_argument("field length does not match the space dof count");
  }
  explicit Field(std::shared_ptr<const Space> space)
      : Field(space, Eigen::VectorXd::Zero(space->num_dofs())) {}

  const Space& space() const { return *space_; }
  const std::shared_ptr<const Space>& space_ptr() const { return space_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  Eigen::VectorXd& coefficients() { return coefficients_; }

 private:
  std::shared_ptr<const Space> space_;
  Eigen::VectorXd coefficients_;
};

using ScalarField = Field<P2ScalarSpace>;
using VectorField = Field<P1DGVectorSpace>;

ScalarField interpolate_scalar(std::shared_ptr<const P2ScalarSpace> space, const ScalarFunction& f);
VectorField interpolate_vector(std::shared_ptr<const P1DGVectorSpace> space, const VectorFunction& f);

/// Local quadratic of `field` on triangle t evaluated at barycentric l.
double evaluate(const ScalarField& field, int t, const Eigen::Vector3d& l);
Eigen::Vector2d evaluate(const VectorField& field, int t, const Eigen::Vector3d& l);

/// Default error rule degree: covers P2 error integrands (2 * 2 + 2) with margin.
inline constexpr int default_error_degree = 8;

double l2_norm(const ScalarField& field, int degree = default_error_degree);
double l2_norm(const VectorField& field, int degree = default_error_degree);
double l2_error(const ScalarField& field, const ScalarFunction& exact, int degree = default_error_degree);
double l2_error(const VectorField& field, const VectorFunction& exact, int degree = default_error_degree);

}  // namespace swe
