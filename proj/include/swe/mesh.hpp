#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace swe {

using Point = Eigen::Vector2d;
using Triangle = std::array<int, 3>;

/// Undirected edge with a < b. `triangles[1]` is -1 on the boundary.
struct Edge {
  int a = -1;
  int b = -1;
  std::array<int, 2> triangles{-1, -1};
  bool on_boundary() const { return triangles[1] < 0; }
};

/// Boundary edge with outward orientation: the domain lies to the left of
/// from -> to, so the outward normal is (dy, -dx) / |d|.
struct BoundaryEdge {
  int from = -1;
  int to = -1;
  int triangle = -1;
  int edge = -1;
};

/**
 * Unstructured affine triangulation of a 2D domain.
 *
 * Construction builds the edge table and boundary from connectivity alone
 * and validates every invariant; a Mesh that exists is valid:
 *  - every triangle is counter-clockwise with positive area,
 *  - every edge is shared by one (boundary) or two (interior) triangles,
 *  - boundary edges form closed loops,
 *  - every vertex belongs to a triangle.
 *
 * Local edge i of a triangle is the edge opposite its vertex i.
 */
class Mesh {
 public:
  Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  /// Edge id of local edge i (opposite vertex i) of triangle t.
  int triangle_edge(int t, int i) const { return triangle_edges_[t][i]; }
  const std::array<int, 3>& triangle_edges(int t) const { return triangle_edges_[t]; }

  bool is_boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }

  Point edge_midpoint(int e) const { return 0.5 * (vertices_[edges_[e].a] + vertices_[edges_[e].b]); }
  double signed_area(int t) const;
  double total_area() const;
  double min_area() const;
  double max_edge_length() const;
  double min_edge_length() const;

  /// Number of connected components of the triangle adjacency graph.
  int num_components() const;

 private:
  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<std::uint8_t> boundary_vertex_;
};

/// Signed area of the triangle (p0, p1, p2); positive when counter-clockwise.
inline double signed_area(const Point& p0, const Point& p1, const Point& p2) {
  return 0.5 * ((p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y()));
}

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
};

enum class RectanglePattern {
  /// Rows of spacing ~h sqrt(3)/2, alternate rows shifted by half a cell:
  /// near-equilateral triangles, half cells at the x ends.
  isotropic,
  /// Square cells split into two right triangles, diagonals alternating.
  right_alternating,
};

RectanglePattern parse_rectangle_pattern(const std::string& name);

/// Structured triangulation with ceil(x extent / h) cells along x. Boundary
/// vertices lie exactly on the rectangle edges.
Mesh build_rectangle_mesh(Interval x_range, Interval y_range, double target_edge_length,
                          RectanglePattern pattern = RectanglePattern::isotropic);

/// Concentric-ring triangulation: n = ceil(radius / h) rings, ring k carries 6k
/// vertices on the circle of radius k * radius / n.
Mesh build_disk_mesh(double radius, double target_edge_length);

/// Displaces interior vertices by at most amplitude * (shortest incident edge),
/// halving a vertex's displacement until its incident triangles stay positive.
Mesh distort_mesh(const Mesh& mesh, double amplitude, std::uint64_t seed);

/// Splits each triangle into four through its edge midpoints. New vertex ids
/// are num_vertices() + edge id.
Mesh refine_uniform(const Mesh& mesh);

/// Concatenates two meshes without merging coincident vertices.
Mesh disjoint_union(const Mesh& first, const Mesh& second);

enum class MeshFormat { gmsh22_ascii, triangle_node_ele };

MeshFormat parse_mesh_format(const std::string& name);

/// Loads a mesh. For triangle_node_ele, `path` names the .node file (or the
/// common basename); the .ele file is found beside it. Warnings about
/// ignored element types are appended to `warnings` when non-null.
Mesh load_mesh(const std::filesystem::path& path, MeshFormat format,
               std::vector<std::string>* warnings = nullptr);

/// Writes nodes, triangles and boundary lines (element types 2 and 1).
void write_gmsh22(const Mesh& mesh, const std::filesystem::path& path);

/// Writes `<basename>.node` and `<basename>.ele` with 1-based indexing.
void write_triangle(const Mesh& mesh, const std::filesystem::path& basename);

}  // namespace swe
