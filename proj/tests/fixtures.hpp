#pragma once

#include "swe/mesh.hpp"
#include "swe/operators.hpp"

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace fixture {

inline std::shared_ptr<const swe::Mesh> share(swe::Mesh m) { return std::make_shared<const swe::Mesh>(std::move(m)); }

inline swe::Mesh two_triangle_square() {
  return swe::Mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}});
}

inline swe::Mesh unit_square(double h = 0.1) { return swe::build_rectangle_mesh({0, 1}, {0, 1}, h); }

struct NamedMesh {
  std::string name;
  std::shared_ptr<const swe::Mesh> mesh;
};

/// Structured and distorted versions of a square and a disk.
inline std::vector<NamedMesh> test_meshes() {
  const swe::Mesh square = swe::build_rectangle_mesh({0, 1}, {0, 1}, 0.125);
  const swe::Mesh disk = swe::build_disk_mesh(1.0, 0.125);
  return {{"square", share(square)},
          {"distorted square", share(swe::distort_mesh(square, 0.2, 7))},
          {"disk", share(disk)},
          {"distorted disk", share(swe::distort_mesh(disk, 0.2, 11))}};
}

inline std::shared_ptr<const swe::OperatorSet> operators(std::shared_ptr<const swe::Mesh> mesh) {
  return std::make_shared<const swe::OperatorSet>(swe::assemble_operators(std::move(mesh)));
}

/// Fresh empty directory below the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("swe_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline double dense_max(const swe::SparseMatrix& m) { return Eigen::MatrixXd(m).cwiseAbs().maxCoeff(); }

}  // namespace fixture
