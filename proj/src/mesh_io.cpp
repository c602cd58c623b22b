#include "swe/errors.hpp"
#include "swe/mesh.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace swe {

namespace {

class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path) : in_(path), path_(path.string()) {
    if (!in_) throw ParseError("cannot open " + path_, 0);
  }

  // Next line that is neither blank nor a '#' comment.
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  }

  std::string require(const char* what) {
    std::string line;
    if (!next(line)) fail(std::string("unexpected end of file, expected ") + what);
    return line;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(path_ + ": " + what, number_); }
  std::size_t line_number() const { return number_; }

 private:
  std::ifstream in_;
  std::string path_;
  std::size_t number_ = 0;
};

template <class T>
std::vector<T> parse_numbers(const std::string& line, const LineReader& reader, std::size_t min_count) {
  std::istringstream ss(line);
  std::vector<T> values;
  T x;
  while (ss >> x) values.push_back(x);
  if (!ss.eof()) reader.fail("malformed number in '" + line + "'");
  if (values.size() < min_count) reader.fail("expected at least " + std::to_string(min_count) + " values");
  return values;
}

// Drops vertices no triangle references, flips clockwise triangles and
// builds the mesh.
Mesh assemble(const std::vector<Point>& nodes, std::vector<Triangle> triangles, std::vector<int>* renumber_out) {
  std::vector<int> renumber(nodes.size(), -1);
  std::vector<Point> vertices;
  for (auto& tri : triangles) {
    for (int& v : tri) {
      if (renumber[v] < 0) {
        renumber[v] = static_cast<int>(vertices.size());
        vertices.push_back(nodes[v]);
      }
      v = renumber[v];
    }
    if (signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]) < 0.0) std::swap(tri[1], tri[2]);
  }
  if (renumber_out) *renumber_out = std::move(renumber);
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh load_gmsh22(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  LineReader reader(path);
  std::vector<Point> nodes;
  std::unordered_map<long, int> node_index;
  std::vector<Triangle> triangles;
  std::vector<std::pair<long, long>> lines;
  std::map<int, int> ignored;
  bool have_format = false, have_nodes = false, have_elements = false;

  std::string line;
  while (reader.next(line)) {
    if (line.rfind("$MeshFormat", 0) == 0) {
      auto header = parse_numbers<double>(reader.require("format header"), reader, 3);
      if (header[0] < 2.0 || header[0] >= 3.0) reader.fail("only MSH 2.x is supported");
      if (header[1] != 0.0) reader.fail("binary MSH files are not supported");
      if (reader.require("$EndMeshFormat").rfind("$EndMeshFormat", 0) != 0) reader.fail("expected $EndMeshFormat");
      have_format = true;
    } else if (line.rfind("$Nodes", 0) == 0) {
      const auto count = parse_numbers<long>(reader.require("node count"), reader, 1)[0];
      if (count < 0) reader.fail("negative node count");
      nodes.reserve(count);
      for (long i = 0; i < count; ++i) {
        std::istringstream ss(reader.require("node"));
        long id;
        double x, y;
        if (!(ss >> id >> x >> y)) reader.fail("malformed node");
        if (!node_index.emplace(id, static_cast<int>(nodes.size())).second)
          reader.fail("duplicate node id " + std::to_string(id));
        nodes.emplace_back(x, y);
      }
      if (reader.require("$EndNodes").rfind("$EndNodes", 0) != 0) reader.fail("expected $EndNodes");
      have_nodes = true;
    } else if (line.rfind("$Elements", 0) == 0) {
      if (!have_nodes) reader.fail("$Elements before $Nodes");
      const auto count = parse_numbers<long>(reader.require("element count"), reader, 1)[0];
      for (long i = 0; i < count; ++i) {
        const auto v = parse_numbers<long>(reader.require("element"), reader, 3);
        const int type = static_cast<int>(v[1]);
        const std::size_t first_node = 3 + static_cast<std::size_t>(v[2]);
        auto node = [&](std::size_t k) {
          if (first_node + k >= v.size()) reader.fail("element has too few nodes");
          auto it = node_index.find(v[first_node + k]);
          if (it == node_index.end()) reader.fail("element references unknown node " + std::to_string(v[first_node + k]));
          return it->second;
        };
        if (type == 2) {
          triangles.push_back({node(0), node(1), node(2)});
        } else if (type == 1) {
          lines.emplace_back(node(0), node(1));
        } else {
          ++ignored[type];
        }
      }
      if (reader.require("$EndElements").rfind("$EndElements", 0) != 0) reader.fail("expected $EndElements");
      have_elements = true;
    } else if (line[0] == '$' && line.rfind("$End", 0) != 0) {
      // Skip unknown sections such as $PhysicalNames.
      const std::string end = "$End" + line.substr(1);
      std::string inner;
      while (true) {
        inner = reader.require(end.c_str());
        if (inner.rfind(end, 0) == 0) break;
      }
    }
  }
  if (!have_format) reader.fail("missing $MeshFormat");
  if (!have_elements) reader.fail("missing $Elements");
  if (triangles.empty()) reader.fail("no triangle elements");
  if (warnings)
    for (auto [type, n] : ignored)
      warnings->push_back("ignored " + std::to_string(n) + " element(s) of gmsh type " + std::to_string(type));

  std::vector<int> renumber;
  Mesh mesh = assemble(nodes, std::move(triangles), &renumber);

  // Declared boundary lines must coincide with topological boundary edges.
  std::set<std::pair<int, int>> boundary;
  for (const auto& be : mesh.boundary_edges()) boundary.emplace(std::min(be.from, be.to), std::max(be.from, be.to));
  for (auto [a, b] : lines) {
    const int ra = renumber[a], rb = renumber[b];
    if (ra < 0 || rb < 0 || !boundary.count({std::min(ra, rb), std::max(ra, rb)}))
      throw MeshError("declared boundary line between nodes " + std::to_string(a) + " and " + std::to_string(b) +
                      " is not a boundary edge of the triangulation");
  }
  return mesh;
}

Mesh load_triangle(const std::filesystem::path& path) {
  std::filesystem::path base = path;
  if (base.extension() == ".node" || base.extension() == ".ele") base.replace_extension();
  auto node_path = base;
  node_path += ".node";
  auto ele_path = base;
  ele_path += ".ele";

  LineReader nodes_in(node_path);
  const auto header = parse_numbers<long>(nodes_in.require("node header"), nodes_in, 1);
  const long count = header[0];
  if (header.size() > 1 && header[1] != 2) nodes_in.fail("only 2D .node files are supported");
  std::vector<Point> nodes;
  long base_index = -1;
  for (long i = 0; i < count; ++i) {
    const auto v = parse_numbers<double>(nodes_in.require("node"), nodes_in, 3);
    const long id = static_cast<long>(v[0]);
    if (i == 0) {
      if (id != 0 && id != 1) nodes_in.fail("first node id must be 0 or 1");
      base_index = id;
    }
    if (id != base_index + i) nodes_in.fail("node ids must be consecutive");
    nodes.emplace_back(v[1], v[2]);
  }

  LineReader ele_in(ele_path);
  const auto ele_header = parse_numbers<long>(ele_in.require("element header"), ele_in, 2);
  if (ele_header[1] != 3 && ele_header[1] != 6) ele_in.fail("elements must have 3 or 6 nodes");
  std::vector<Triangle> triangles;
  for (long i = 0; i < ele_header[0]; ++i) {
    const auto v = parse_numbers<long>(ele_in.require("element"), ele_in, 4);
    Triangle tri;
    for (int k = 0; k < 3; ++k) {
      const long local = v[1 + k] - base_index;
      if (local < 0 || local >= count) ele_in.fail("element references unknown node " + std::to_string(v[1 + k]));
      tri[k] = static_cast<int>(local);
    }
    triangles.push_back(tri);
  }
  return assemble(nodes, std::move(triangles), nullptr);
}

void write_point(std::FILE* f, const Point& p) { std::fprintf(f, "%.17g %.17g", p.x(), p.y()); }

}  // namespace

MeshFormat parse_mesh_format(const std::string& name) {
  if (name == "gmsh22-ascii" || name == "gmsh" || name == "msh") return MeshFormat::gmsh22_ascii;
  if (name == "triangle-node-ele" || name == "triangle") return MeshFormat::triangle_node_ele;
  throw ConfigError("unknown mesh format '" + name + "'");
}

Mesh load_mesh(const std::filesystem::path& path, MeshFormat format, std::vector<std::string>* warnings) {
  switch (format) {
    case MeshFormat::gmsh22_ascii:
      return load_gmsh22(path, warnings);
    case MeshFormat::triangle_node_ele:
      return load_triangle(path);
  }
  throw ConfigError("unknown mesh format");
}

void write_gmsh22(const Mesh& mesh, const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw Error("cannot write " + path.string());
  std::fprintf(f, "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n%d\n", mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    std::fprintf(f, "%d ", v + 1);
    write_point(f, mesh.vertices()[v]);
    std::fprintf(f, " 0\n");
  }
  const auto& boundary = mesh.boundary_edges();
  std::fprintf(f, "$EndNodes\n$Elements\n%zu\n", boundary.size() + mesh.triangles().size());
  int id = 1;
  for (const auto& be : boundary) std::fprintf(f, "%d 1 2 1 1 %d %d\n", id++, be.from + 1, be.to + 1);
  for (const auto& tri : mesh.triangles())
    std::fprintf(f, "%d 2 2 2 2 %d %d %d\n", id++, tri[0] + 1, tri[1] + 1, tri[2] + 1);
  std::fprintf(f, "$EndElements\n");
  std::fclose(f);
}

void write_triangle(const Mesh& mesh, const std::filesystem::path& basename) {
  auto node_path = basename;
  node_path += ".node";
  auto ele_path = basename;
  ele_path += ".ele";
  std::FILE* f = std::fopen(node_path.string().c_str(), "w");
  if (!f) throw Error("cannot write " + node_path.string());
  std::fprintf(f, "%d 2 0 1\n", mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    std::fprintf(f, "%d ", v + 1);
    write_point(f, mesh.vertices()[v]);
    std::fprintf(f, " %d\n", mesh.is_boundary_vertex(v) ? 1 : 0);
  }
  std::fclose(f);
  f = std::fopen(ele_path.string().c_str(), "w");
  if (!f) throw Error("cannot write " + ele_path.string());
  std::fprintf(f, "%d 3 0\n", mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    std::fprintf(f, "%d %d %d %d\n", t + 1, tri[0] + 1, tri[1] + 1, tri[2] + 1);
  }
  std::fclose(f);
}

}  // namespace swe
