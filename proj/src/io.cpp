#include "swe/io.hpp"

#include "swe/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

namespace swe {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double value, int digits) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, digits);
  return std::string(buffer, result.ptr);
}

void write_vtk(const Mesh& mesh, const std::vector<NamedScalarField>& scalars,
               const std::vector<NamedVectorField>& vectors, const std::filesystem::path& path) {
  for (const auto& s : scalars)
    if (&s.field->space().mesh() != &mesh) throw ConfigError("scalar field '" + s.name + "' lives on another mesh");
  for (const auto& v : vectors)
    if (&v.field->space().mesh() != &mesh) throw ConfigError("vector field '" + v.name + "' lives on another mesh");

  const int nv = mesh.num_vertices();
  const int nt = mesh.num_triangles();
  const int n_p2 = nv + mesh.num_edges();
  const int n_points = n_p2 + 3 * nt;
  auto out = open_output(path);
  auto num = [](double x) { return format_double(x, 9); };

  out << "# vtk DataFile Version 3.0\nP1DG-P2 fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n_points << " double\n";
  for (int v = 0; v < nv; ++v) out << num(mesh.vertices()[v].x()) << ' ' << num(mesh.vertices()[v].y()) << " 0\n";
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Point m = mesh.edge_midpoint(e);
    out << num(m.x()) << ' ' << num(m.y()) << " 0\n";
  }
  for (const auto& tri : mesh.triangles())
    for (int v : tri) out << num(mesh.vertices()[v].x()) << ' ' << num(mesh.vertices()[v].y()) << " 0\n";

  out << "CELLS " << 2 * nt << ' ' << 7 * nt + 4 * nt << '\n';
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles()[t];
    // VTK quadratic triangle: corners, then midpoints of (0,1), (1,2), (2,0).
    out << "6 " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << nv + mesh.triangle_edge(t, 2) << ' '
        << nv + mesh.triangle_edge(t, 0) << ' ' << nv + mesh.triangle_edge(t, 1) << '\n';
  }
  for (int t = 0; t < nt; ++t) {
    const int base = n_p2 + 3 * t;
    out << "3 " << base << ' ' << base + 1 << ' ' << base + 2 << '\n';
  }
  out << "CELL_TYPES " << 2 * nt << '\n';
  for (int t = 0; t < nt; ++t) out << "22\n";
  for (int t = 0; t < nt; ++t) out << "5\n";
  out << "CELL_DATA " << 2 * nt << "\nSCALARS piece int 1\nLOOKUP_TABLE default\n";
  for (int t = 0; t < nt; ++t) out << "0\n";
  for (int t = 0; t < nt; ++t) out << "1\n";

  if (scalars.empty() && vectors.empty()) return;
  out << "POINT_DATA " << n_points << '\n';
  for (const auto& [name, field] : scalars) {
    const auto& c = field->coefficients();
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int d = 0; d < n_p2; ++d) out << num(c(d)) << '\n';
    for (const auto& tri : mesh.triangles())
      for (int v : tri) out << num(c(v)) << '\n';
  }
  for (const auto& [name, field] : vectors) {
    const auto& c = field->coefficients();
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(n_p2, 2);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_p2);
    for (int t = 0; t < nt; ++t) {
      for (int i = 0; i < 3; ++i) {
        const Eigen::Vector2d value(c(P1DGVectorSpace::dof(t, 0, i)), c(P1DGVectorSpace::dof(t, 1, i)));
        const int v = mesh.triangles()[t][i];
        sums.row(v) += value.transpose();
        counts(v) += 1.0;
        // A midpoint holds the mean of its two adjacent vertex values per element.
        for (int e : {mesh.triangle_edge(t, (i + 1) % 3), mesh.triangle_edge(t, (i + 2) % 3)}) {
          sums.row(nv + e) += 0.5 * value.transpose();
          counts(nv + e) += 0.5;
        }
      }
    }
    out << "VECTORS " << name << " double\n";
    for (int d = 0; d < n_p2; ++d) out << num(sums(d, 0) / counts(d)) << ' ' << num(sums(d, 1) / counts(d)) << " 0\n";
    for (int t = 0; t < nt; ++t)
      for (int i = 0; i < 3; ++i)
        out << num(c(P1DGVectorSpace::dof(t, 0, i))) << ' ' << num(c(P1DGVectorSpace::dof(t, 1, i))) << " 0\n";
  }
  if (!out) throw Error("failed writing " + path.string());
}

void write_csv_timeseries(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows,
                          const std::filesystem::path& path) {
  auto out = open_output(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw ConfigError("CSV row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

SnapshotWriter::SnapshotWriter(std::filesystem::path directory, std::string series)
    : directory_(std::move(directory)), series_(std::move(series)) {}

std::filesystem::path SnapshotWriter::next_path() {
  char name[32];
  std::snprintf(name, sizeof name, "_%04d.vtk", counter_++);
  return directory_ / (series_ + name);
}

std::filesystem::path SnapshotWriter::write(const Mesh& mesh, const std::vector<NamedScalarField>& scalars,
                                            const std::vector<NamedVectorField>& vectors) {
  auto path = next_path();
  write_vtk(mesh, scalars, vectors, path);
  return path;
}

}  // namespace swe
