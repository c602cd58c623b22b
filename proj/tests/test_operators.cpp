#include "fixtures.hpp"
#include "oracles.hpp"

#include "swe/errors.hpp"
#include "swe/random.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>

using namespace swe;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& m) { return Eigen::MatrixXd(m); }

/// Global P2 matrix assembled from oracle element blocks.
Eigen::MatrixXd oracle_assemble(const P2ScalarSpace& space, bool stiffness) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(space.num_dofs(), space.num_dofs());
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const auto el = oracle::element(space.mesh(), t);
    const auto local = stiffness ? oracle::p2_stiffness(el) : oracle::p2_mass(el);
    const auto& d = space.dofs(t);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) a(d[i], d[j]) += local(i, j);
  }
  return a;
}

Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed) {
  Random rng(seed);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.uniform(-1, 1);
  return x;
}

}  // namespace

TEST_CASE("scalar mass matches exact integration") {
  for (const auto& [name, mesh] : fixture::test_meshes()) {
    CAPTURE(name);
    const P2ScalarSpace space(mesh);
    const auto m = assemble_scalar_mass(space);
    CHECK(m.symmetric);
    const Eigen::MatrixXd d = dense(m.matrix);
    const Eigen::MatrixXd o = oracle_assemble(space, false);
    CHECK((d - o).cwiseAbs().maxCoeff() < 1e-12 * o.cwiseAbs().maxCoeff());
    CHECK(std::abs(d.sum() - mesh->total_area()) < 1e-12);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(d, Eigen::EigenvaluesOnly).eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("reference triangle mass entries") {
  // int_T phi_i phi_j on the unit right triangle: vertex-vertex 1/60, 1/360 off
  // diagonal; vertex-opposite-midpoint -1/90; midpoint-midpoint 4/45, 2/45.
  const auto mesh = fixture::share(Mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}));
  const P2ScalarSpace space(mesh);
  const Eigen::MatrixXd m = dense(assemble_scalar_mass(space).matrix);
  const auto& d = space.dofs(0);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      double expect;
      if (i < 3 && j < 3) expect = i == j ? 1.0 / 60 : -1.0 / 360;
      else if (i >= 3 && j >= 3) expect = i == j ? 4.0 / 45 : 2.0 / 45;
      else expect = (i < 3 ? i : j) == (i < 3 ? j : i) - 3 ? -1.0 / 90 : 0.0;
      CHECK(std::abs(m(d[i], d[j]) - expect) < 1e-15);
    }
}

TEST_CASE("stiffness matches exact integration") {
  for (const auto& [name, mesh] : fixture::test_meshes()) {
    CAPTURE(name);
    const P2ScalarSpace space(mesh);
    const auto k = assemble_stiffness(space);
    const Eigen::MatrixXd d = dense(k.matrix);
    const Eigen::MatrixXd o = oracle_assemble(space, true);
    CHECK((d - o).cwiseAbs().maxCoeff() < 1e-12 * o.cwiseAbs().maxCoeff());
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((d * Eigen::VectorXd::Ones(d.rows())).cwiseAbs().maxCoeff() < 1e-12);
    for (int s = 0; s < 100; ++s) {
      const Eigen::VectorXd h = random_vector(d.rows(), s);
      CHECK(h.dot(d * h) >= 0.0);
    }
  }
}

TEST_CASE("vector mass blocks") {
  const auto mesh = fixture::share(distort_mesh(build_disk_mesh(1.0, 0.2), 0.2, 2));
  const P1DGVectorSpace space(mesh);
  const auto mu = assemble_vector_mass(space);
  CHECK(mu.num_blocks() == mesh->num_triangles());
  for (int t = 0; t < mesh->num_triangles(); ++t) {
    const auto el = oracle::element(*mesh, t);
    const Matrix6d& b = mu.block(t);
    CHECK(b.block<3, 3>(0, 3).isZero(0.0));
    CHECK(b.block<3, 3>(3, 0).isZero(0.0));
    CHECK(std::abs(b.block<3, 3>(0, 0).sum() - el.area) < 1e-14);
    const Eigen::Matrix3d p1 = oracle::p1_mass(el);
    CHECK((b.block<3, 3>(0, 0) - p1).cwiseAbs().maxCoeff() < 1e-12 * p1.cwiseAbs().maxCoeff());
    CHECK((b.block<3, 3>(3, 3) - p1).cwiseAbs().maxCoeff() < 1e-12 * p1.cwiseAbs().maxCoeff());
  }
  const Eigen::VectorXd x = random_vector(mu.size(), 5);
  CHECK((mu * x - mu.to_sparse() * x).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((mu.transpose_times(x) - mu * x).cwiseAbs().maxCoeff() < 1e-15);
  const Eigen::VectorXd y = mu.factorize().solve(mu * x);
  CHECK((y - x).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("coriolis blocks") {
  const auto mesh = fixture::share(distort_mesh(build_disk_mesh(1.0, 0.2), 0.2, 3));
  const auto vs = std::make_shared<const P1DGVectorSpace>(mesh);
  const auto c = assemble_coriolis(*vs);
  for (int t = 0; t < mesh->num_triangles(); ++t) {
    const auto el = oracle::element(*mesh, t);
    const Matrix6d& b = c.block(t);
    CHECK((b + b.transpose()).cwiseAbs().maxCoeff() < 1e-14 * el.area);
    const Eigen::Matrix3d p1 = oracle::p1_mass(el);
    CHECK((b.block<3, 3>(3, 0) - p1).cwiseAbs().maxCoeff() < 1e-12 * p1.maxCoeff());
    CHECK((b.block<3, 3>(0, 3) + p1).cwiseAbs().maxCoeff() < 1e-12 * p1.maxCoeff());
  }
  const auto u = interpolate_vector(vs, [](const Point&) { return Eigen::Vector2d(1, 0); });
  const auto w = interpolate_vector(vs, [](const Point&) { return Eigen::Vector2d(0, 1); });
  CHECK(std::abs(w.coefficients().dot(c * u.coefficients()) - mesh->total_area()) < 1e-12);
  for (int s = 0; s < 100; ++s) {
    const Eigen::VectorXd x = random_vector(c.size(), 100 + s);
    CHECK(std::abs(x.dot(c * x)) < 1e-14);
  }
}

TEST_CASE("gradient blocks match exact integration") {
  for (const auto& [name, mesh] : fixture::test_meshes()) {
    CAPTURE(name);
    const P1DGVectorSpace vs(mesh);
    const P2ScalarSpace ss(mesh);
    const auto g = assemble_gradient(vs, ss);
    const Eigen::MatrixXd gd = dense(g.matrix);
    for (int t = 0; t < mesh->num_triangles(); ++t) {
      const auto o = oracle::gradient_block(oracle::element(*mesh, t));
      const Matrix6d local = element_gradient(vs, t);
      CHECK((local - o).cwiseAbs().maxCoeff() < 1e-12 * o.cwiseAbs().maxCoeff());
      // the assembled rows of element t hold exactly its local block
      for (int r = 0; r < 6; ++r)
        for (int j = 0; j < 6; ++j) CHECK(gd(6 * t + r, ss.dofs(t)[j]) == doctest::Approx(o(r, j)).epsilon(1e-12));
    }
    CHECK((gd * Eigen::VectorXd::Ones(gd.cols())).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("divergence theorem oracle for G^T (1, 0)") {
  const auto mesh = fixture::share(fixture::unit_square(0.25));
  const auto ops = fixture::operators(mesh);
  const auto u = interpolate_vector(ops->vector_space, [](const Point&) { return Eigen::Vector2d(1, 0); });
  const Eigen::VectorXd gt = ops->gradient.transpose_times(u.coefficients());

  // oint phi_j n_x ds edge by edge: the quadratic vertex functions integrate to
  // L/6 along an edge, the midpoint function to 2L/3; n_x L = dy.
  Eigen::VectorXd expect = Eigen::VectorXd::Zero(gt.size());
  for (const auto& be : mesh->boundary_edges()) {
    const double dy = mesh->vertices()[be.to].y() - mesh->vertices()[be.from].y();
    expect(be.from) += dy / 6.0;
    expect(be.to) += dy / 6.0;
    expect(mesh->num_vertices() + be.edge) += 2.0 * dy / 3.0;
  }
  CHECK((gt - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("discrete gradient is the pointwise gradient") {
  const auto mesh = fixture::share(distort_mesh(build_disk_mesh(1.0, 0.2), 0.2, 6));
  const auto ops = fixture::operators(mesh);
  auto check_field = [&](const ScalarFunction& f, const std::function<Eigen::Vector2d(const Point&)>& grad,
                         double tol) {
    const auto q = discrete_gradient(ops->mass_u, ops->gradient, interpolate_scalar(ops->scalar_space, f),
                                     ops->vector_space);
    double err = 0.0;
    for (int t = 0; t < mesh->num_triangles(); ++t)
      for (int i = 0; i < 3; ++i) {
        const Point& x = mesh->vertices()[mesh->triangles()[t][i]];
        err = std::max(err, std::abs(q.coefficients()(P1DGVectorSpace::dof(t, 0, i)) - grad(x).x()));
        err = std::max(err, std::abs(q.coefficients()(P1DGVectorSpace::dof(t, 1, i)) - grad(x).y()));
      }
    CHECK(err < tol);
  };
  check_field([](const Point& p) { return p.x(); }, [](const Point&) { return Eigen::Vector2d(1, 0); }, 1e-13);
  check_field([](const Point& p) { return p.x() * p.x(); },
              [](const Point& p) { return Eigen::Vector2d(2 * p.x(), 0); }, 1e-12);
  check_field([](const Point& p) { return p.squaredNorm(); }, [](const Point& p) { return Eigen::Vector2d(2 * p); },
              1e-12);

  // random coefficients against the Vandermonde fit of each local quadratic
  for (int s = 0; s < 5; ++s) {
    const ScalarField h(ops->scalar_space, random_vector(ops->scalar_space->num_dofs(), 900 + s));
    const auto q = discrete_gradient(ops->mass_u, ops->gradient, h, ops->vector_space);
    for (int t = 0; t < mesh->num_triangles(); ++t) {
      Eigen::Matrix<double, 6, 1> local;
      for (int i = 0; i < 6; ++i) local(i) = h.coefficients()(ops->scalar_space->dofs(t)[i]);
      const auto g = oracle::quadratic_vertex_gradients(oracle::element(*mesh, t), local);
      for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(q.coefficients()(P1DGVectorSpace::dof(t, 0, i)) - g(i, 0)) < 1e-11 * g.cwiseAbs().maxCoeff());
        CHECK(std::abs(q.coefficients()(P1DGVectorSpace::dof(t, 1, i)) - g(i, 1)) < 1e-11 * g.cwiseAbs().maxCoeff());
      }
    }
  }
}

TEST_CASE("discrete laplacian equals the stiffness matrix") {
  {
    const auto ops = fixture::operators(fixture::share(fixture::two_triangle_square()));
    const auto l = discrete_laplacian(ops->mass_u, ops->gradient);
    CHECK(fixture::dense_max(l.matrix - ops->stiffness.matrix) < 1e-11);
  }
  const auto disk = fixture::share(distort_mesh(build_disk_mesh(1.0, 0.17), 0.2, 12));
  MESSAGE("disk triangles " << disk->num_triangles());
  CHECK(disk->num_triangles() >= 200);
  const auto ops = fixture::operators(disk);
  const auto l = discrete_laplacian(ops->mass_u, ops->gradient);
  CHECK(fixture::dense_max(l.matrix - ops->stiffness.matrix) < 1e-10);
  CHECK((l * Eigen::VectorXd::Ones(l.cols())).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("singular element blocks are reported") {
  std::vector<Matrix6d> blocks(3, Matrix6d::Identity());
  blocks[1].setZero();
  try {
    ElementBlockOperator(blocks).factorize();
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
}

TEST_CASE("matrix market output") {
  const auto ops = fixture::operators(fixture::share(fixture::two_triangle_square()));
  const auto dir = fixture::temp_dir("mm");
  write_matrix_market(ops->mass_h.matrix, dir / "m.mtx");
  std::ifstream in(dir / "m.mtx");
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("%%MatrixMarket matrix coordinate real general", 0) == 0);
  long r, c, nnz;
  in >> r >> c >> nnz;
  CHECK(r == ops->mass_h.rows());
  CHECK(nnz == ops->mass_h.matrix.nonZeros());
  Eigen::MatrixXd back = Eigen::MatrixXd::Zero(r, c);
  for (long k = 0; k < nnz; ++k) {
    long i, j;
    double v;
    in >> i >> j >> v;
    back(i - 1, j - 1) = v;
  }
  CHECK((back - dense(ops->mass_h.matrix)).cwiseAbs().maxCoeff() == 0.0);
}
