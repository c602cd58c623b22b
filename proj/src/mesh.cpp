#include "swe/mesh.hpp"

#include "swe/errors.hpp"
#include "swe/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

namespace swe {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

std::string tri_name(int t) { return "triangle " + std::to_string(t); }

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const int nv = num_vertices();
  const int nt = num_triangles();
  if (nt == 0) throw MeshError("mesh has no triangles");

  std::vector<std::uint8_t> used(nv, 0);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int v : tri) {
      if (v < 0 || v >= nv) throw MeshError(tri_name(t) + " references vertex " + std::to_string(v) + " out of range");
      used[v] = 1;
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw MeshError(tri_name(t) + " has repeated vertices");
    if (!(signed_area(t) > 0.0))
      throw MeshError(tri_name(t) + " is not positively oriented (area " + std::to_string(signed_area(t)) + ")");
  }
  for (int v = 0; v < nv; ++v)
    if (!used[v]) throw MeshError("vertex " + std::to_string(v) + " is not referenced by any triangle");

  // Edge table. Local edge i runs counter-clockwise from vertex i+1 to i+2.
  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(3 * static_cast<std::size_t>(nt));
  triangle_edges_.resize(nt);
  std::vector<std::array<int, 2>> direction;  // `from` vertex seen by each incident triangle
  for (int t = 0; t < nt; ++t) {
    for (int i = 0; i < 3; ++i) {
      const int from = triangles_[t][(i + 1) % 3];
      const int to = triangles_[t][(i + 2) % 3];
      auto [it, inserted] = lookup.try_emplace(edge_key(from, to), num_edges());
      if (inserted) {
        edges_.push_back(Edge{std::min(from, to), std::max(from, to), {t, -1}});
        direction.push_back({from, -1});
      } else {
        Edge& e = edges_[it->second];
        if (e.triangles[1] >= 0)
          throw MeshError("edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
                          ") is shared by more than two triangles");
        if (direction[it->second][0] == from)
          throw MeshError("triangles " + std::to_string(e.triangles[0]) + " and " + std::to_string(t) +
                          " overlap across edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) + ")");
        e.triangles[1] = t;
        direction[it->second][1] = from;
      }
      triangle_edges_[t][i] = it->second;
    }
  }

  boundary_vertex_.assign(nv, 0);
  std::vector<int> out_degree(nv, 0), in_degree(nv, 0);
  for (int t = 0; t < nt; ++t) {
    for (int i = 0; i < 3; ++i) {
      const int e = triangle_edges_[t][i];
      if (!edges_[e].on_boundary()) continue;
      BoundaryEdge be{triangles_[t][(i + 1) % 3], triangles_[t][(i + 2) % 3], t, e};
      boundary_.push_back(be);
      boundary_vertex_[be.from] = boundary_vertex_[be.to] = 1;
      ++out_degree[be.from];
      ++in_degree[be.to];
    }
  }
  if (boundary_.empty()) throw MeshError("mesh has no boundary");
  for (int v = 0; v < nv; ++v)
    if (out_degree[v] != in_degree[v])
      throw MeshError("boundary is not closed at vertex " + std::to_string(v));
}

double Mesh::signed_area(int t) const {
  const auto& tri = triangles_[t];
  return swe::signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (int t = 0; t < num_triangles(); ++t) sum += signed_area(t);
  return sum;
}

double Mesh::min_area() const {
  double m = signed_area(0);
  for (int t = 1; t < num_triangles(); ++t) m = std::min(m, signed_area(t));
  return m;
}

double Mesh::max_edge_length() const {
  double m = 0.0;
  for (const auto& e : edges_) m = std::max(m, (vertices_[e.a] - vertices_[e.b]).norm());
  return m;
}

double Mesh::min_edge_length() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : edges_) m = std::min(m, (vertices_[e.a] - vertices_[e.b]).norm());
  return m;
}

int Mesh::num_components() const {
  std::vector<int> parent(num_triangles());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges_)
    if (!e.on_boundary()) parent[find(e.triangles[0])] = find(e.triangles[1]);
  int count = 0;
  for (int t = 0; t < num_triangles(); ++t) count += find(t) == t;
  return count;
}

namespace {

// Triangulates the strip between two polylines whose vertices are ordered by
// increasing `key`, always closing the triangle whose next vertex has the
// smaller key. `lower` lies to the right of the walking direction, so the
// emitted triangles are counter-clockwise.
template <class Key>
void zip_rows(const std::vector<int>& lower, const std::vector<int>& upper, Key&& key, bool closed,
              std::vector<Triangle>& out) {
  const std::size_t m = lower.size(), n = upper.size();
  const std::size_t m_steps = closed ? m : m - 1, n_steps = closed ? n : n - 1;
  std::size_t i = 0, j = 0;
  while (i < m_steps || j < n_steps) {
    const bool advance_upper = i == m_steps || (j < n_steps && key(upper, j + 1, n) < key(lower, i + 1, m));
    if (advance_upper) {
      out.push_back({lower[i % m], upper[(j + 1) % n], upper[j % n]});
      ++j;
    } else {
      out.push_back({lower[i % m], lower[(i + 1) % m], upper[j % n]});
      ++i;
    }
  }
}

}  // namespace

RectanglePattern parse_rectangle_pattern(const std::string& name) {
  if (name == "isotropic") return RectanglePattern::isotropic;
  if (name == "right" || name == "right-alternating") return RectanglePattern::right_alternating;
  throw ConfigError("unknown rectangle mesh pattern '" + name + "'");
}

Mesh build_rectangle_mesh(Interval x_range, Interval y_range, double h, RectanglePattern pattern) {
  if (!(x_range.length() > 0.0) || !(y_range.length() > 0.0))
    throw ConfigError("rectangle mesh needs intervals with hi > lo");
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("target edge length must be positive");
  const int nx = std::max(1, static_cast<int>(std::ceil(x_range.length() / h - 1e-9)));
  const double row_spacing = pattern == RectanglePattern::isotropic ? h * std::sqrt(3.0) / 2.0 : h;
  const int ny = std::max(1, static_cast<int>(std::ceil(y_range.length() / row_spacing - 1e-9)));
  auto x_at = [&](double s) { return s >= nx ? x_range.hi : x_range.lo + x_range.length() * s / nx; };

  std::vector<Point> vertices;
  std::vector<std::vector<int>> rows(ny + 1);
  std::vector<std::vector<double>> row_s(ny + 1);  // x positions in cell units
  for (int j = 0; j <= ny; ++j) {
    const double y = j == ny ? y_range.hi : y_range.lo + y_range.length() * j / ny;
    std::vector<double>& s = row_s[j];
    if (pattern == RectanglePattern::isotropic && j % 2 == 1) {
      s.push_back(0.0);
      for (int i = 0; i < nx; ++i) s.push_back(i + 0.5);
      s.push_back(nx);
    } else {
      for (int i = 0; i <= nx; ++i) s.push_back(i);
    }
    for (double si : s) {
      rows[j].push_back(static_cast<int>(vertices.size()));
      vertices.emplace_back(x_at(si), y);
    }
  }

  std::vector<Triangle> triangles;
  if (pattern == RectanglePattern::isotropic) {
    for (int j = 0; j < ny; ++j) {
      const auto& s_lo = row_s[j];
      const auto& s_hi = row_s[j + 1];
      // Prefer the upper row on ties; keys are exact multiples of 1/2.
      zip_rows(
          rows[j], rows[j + 1],
          [&](const std::vector<int>& row, std::size_t k, std::size_t) {
            return &row == &rows[j] ? s_lo[k] : s_hi[k] - 0.25;
          },
          false, triangles);
    }
  } else {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const int v00 = rows[j][i], v10 = rows[j][i + 1], v01 = rows[j + 1][i], v11 = rows[j + 1][i + 1];
        if ((i + j) % 2 == 0) {
          triangles.push_back({v00, v10, v11});
          triangles.push_back({v00, v11, v01});
        } else {
          triangles.push_back({v00, v10, v01});
          triangles.push_back({v10, v11, v01});
        }
      }
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh build_disk_mesh(double radius, double h) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("disk radius must be positive");
  if (!(h > 0.0)) throw ConfigError("target edge length must be positive");
  if (h >= radius) throw ConfigError("target edge length must be smaller than the disk radius");
  const int rings = static_cast<int>(std::ceil(radius / h - 1e-9));

  std::vector<Point> vertices{Point(0.0, 0.0)};
  std::vector<int> ring_start{0};
  for (int k = 1; k <= rings; ++k) {
    ring_start.push_back(static_cast<int>(vertices.size()));
    const double r = k == rings ? radius : radius * k / rings;
    const int count = 6 * k;
    for (int j = 0; j < count; ++j) {
      const double angle = 2.0 * std::numbers::pi * j / count;
      vertices.emplace_back(r * std::cos(angle), r * std::sin(angle));
    }
  }

  std::vector<Triangle> triangles;
  for (int j = 0; j < 6; ++j) triangles.push_back({0, 1 + j, 1 + (j + 1) % 6});
  for (int k = 2; k <= rings; ++k) {
    const int m = 6 * (k - 1), n = 6 * k;
    const int in0 = ring_start[k - 1], out0 = ring_start[k];
    int i = 0, j = 0;
    // Walk both rings by angle, always closing the triangle whose next vertex
    // has the smaller angle. Angles compare exactly as (i+1)/m vs (j+1)/n.
    while (i < m || j < n) {
      const bool advance_outer = i == m || (j < n && static_cast<long>(j + 1) * m < static_cast<long>(i + 1) * n);
      if (advance_outer) {
        triangles.push_back({in0 + i % m, out0 + j, out0 + (j + 1) % n});
        ++j;
      } else {
        triangles.push_back({in0 + i, out0 + j % n, in0 + (i + 1) % m});
        ++i;
      }
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh distort_mesh(const Mesh& mesh, double amplitude, std::uint64_t seed) {
  if (!(amplitude >= 0.0 && amplitude < 0.3)) throw ConfigError("distortion amplitude must lie in [0, 0.3)");
  std::vector<Point> vertices = mesh.vertices();
  if (amplitude == 0.0) return Mesh(std::move(vertices), mesh.triangles());

  const int nv = mesh.num_vertices();
  std::vector<std::vector<int>> incident(nv);
  for (int t = 0; t < mesh.num_triangles(); ++t)
    for (int v : mesh.triangles()[t]) incident[v].push_back(t);
  std::vector<double> shortest(nv, std::numeric_limits<double>::infinity());
  for (const auto& e : mesh.edges()) {
    const double len = (mesh.vertices()[e.a] - mesh.vertices()[e.b]).norm();
    shortest[e.a] = std::min(shortest[e.a], len);
    shortest[e.b] = std::min(shortest[e.b], len);
  }

  Random rng(seed);
  const auto& tris = mesh.triangles();
  for (int v = 0; v < nv; ++v) {
    // Both draws happen for every vertex so the stream does not depend on retries.
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double fraction = rng.uniform();
    if (mesh.is_boundary_vertex(v)) continue;
    const Point origin = vertices[v];
    Point offset = amplitude * shortest[v] * fraction * Point(std::cos(angle), std::sin(angle));
    for (int attempt = 0; attempt < 40; ++attempt) {
      vertices[v] = origin + offset;
      const bool valid = std::all_of(incident[v].begin(), incident[v].end(), [&](int t) {
        return signed_area(vertices[tris[t][0]], vertices[tris[t][1]], vertices[tris[t][2]]) > 0.0;
      });
      if (valid) break;
      offset *= 0.5;
      vertices[v] = origin;
    }
  }
  return Mesh(std::move(vertices), mesh.triangles());
}

Mesh refine_uniform(const Mesh& mesh) {
  const int nv = mesh.num_vertices();
  std::vector<Point> vertices = mesh.vertices();
  vertices.reserve(nv + mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) vertices.push_back(mesh.edge_midpoint(e));

  std::vector<Triangle> triangles;
  triangles.reserve(4 * static_cast<std::size_t>(mesh.num_triangles()));
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& [v0, v1, v2] = mesh.triangles()[t];
    const int m0 = nv + mesh.triangle_edge(t, 0);
    const int m1 = nv + mesh.triangle_edge(t, 1);
    const int m2 = nv + mesh.triangle_edge(t, 2);
    triangles.push_back({v0, m2, m1});
    triangles.push_back({m2, v1, m0});
    triangles.push_back({m1, m0, v2});
    triangles.push_back({m0, m1, m2});
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh disjoint_union(const Mesh& first, const Mesh& second) {
  std::vector<Point> vertices = first.vertices();
  vertices.insert(vertices.end(), second.vertices().begin(), second.vertices().end());
  std::vector<Triangle> triangles = first.triangles();
  const int offset = first.num_vertices();
  for (auto tri : second.triangles()) {
    for (int& v : tri) v += offset;
    triangles.push_back(tri);
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

}  // namespace swe
