#include "fixtures.hpp"
#include "oracles.hpp"

#include "swe/analysis.hpp"
#include "swe/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>

using namespace swe;

namespace {

double max_node_error(const VectorField& u, const std::function<Eigen::Vector2d(const Point&)>& f) {
  const Mesh& mesh = u.space().mesh();
  double e = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t)
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector2d x = f(mesh.vertices()[mesh.triangles()[t][i]]);
      e = std::max(e, std::abs(u.coefficients()(P1DGVectorSpace::dof(t, 0, i)) - x.x()));
      e = std::max(e, std::abs(u.coefficients()(P1DGVectorSpace::dof(t, 1, i)) - x.y()));
    }
  return e;
}

SystemConfig cfg(double ro, double fr) {
  SystemConfig c;
  c.rossby = ro;
  c.froude = fr;
  return c;
}

}  // namespace

TEST_CASE("balanced velocity of polynomials") {
  const auto ops = fixture::operators(fixture::share(distort_mesh(build_disk_mesh(1.0, 0.2), 0.2, 2)));
  const auto psi1 = interpolate_scalar(ops->scalar_space, [](const Point& p) { return p.x(); });
  CHECK(max_node_error(balanced_velocity(psi1, ops->vector_space), [](const Point&) { return Eigen::Vector2d(0, 1); }) <
        1e-13);
  const auto psi2 = interpolate_scalar(ops->scalar_space, [](const Point& p) { return p.squaredNorm(); });
  CHECK(max_node_error(balanced_velocity(psi2, ops->vector_space),
                       [](const Point& p) { return Eigen::Vector2d(-2 * p.y(), 2 * p.x()); }) < 1e-12);
}

TEST_CASE("pointwise and weak balanced velocity agree") {
  for (const auto& [name, mesh] : fixture::test_meshes()) {
    CAPTURE(name);
    const auto ops = fixture::operators(mesh);
    const auto psi = interpolate_scalar(ops->scalar_space, [](const Point& p) {
      return std::exp(-(p - Point(0.3, 0.2)).squaredNorm() / 0.1);
    });
    const auto a = balanced_velocity(psi, ops->vector_space);
    const auto b = weak_balanced_velocity(psi, *ops);
    CHECK((a.coefficients() - b.coefficients()).cwiseAbs().maxCoeff() < 1e-11 * a.coefficients().cwiseAbs().maxCoeff());
  }
}

TEST_CASE("balanced state thickness") {
  const auto ops = fixture::operators(fixture::share(build_disk_mesh(1.0, 0.25)));
  const auto psi = random_boundary_zero_streamfunction(ops->scalar_space, 3);
  const State s = balanced_state(psi, *ops, cfg(0.1, 0.5));
  CHECK((s.h.coefficients() - 2.5 * psi.coefficients()).cwiseAbs().maxCoeff() < 1e-15);
  const State norot = balanced_state(psi, *ops, cfg(SystemConfig::no_rotation, 1.0));
  CHECK(norot.h.coefficients().isZero(0.0));
}

TEST_CASE("divergence norm against a dense oracle") {
  const auto mesh = fixture::share(fixture::two_triangle_square());
  const auto ops = fixture::operators(mesh);
  const auto& space = *ops->scalar_space;
  auto field = [](const Point& p) { return Eigen::Vector2d(p.x(), p.y()); };
  const auto u = interpolate_vector(ops->vector_space, field);

  Eigen::MatrixXd mh = Eigen::MatrixXd::Zero(space.num_dofs(), space.num_dofs());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(space.num_dofs());
  for (int t = 0; t < mesh->num_triangles(); ++t) {
    const auto el = oracle::element(*mesh, t);
    const auto m = oracle::p2_mass(el);
    const auto g = oracle::gradient_block(el);
    Eigen::Matrix<double, 6, 1> ul;
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector2d v = field(el.v[i]);
      ul(i) = v.x();
      ul(3 + i) = v.y();
    }
    const Eigen::Matrix<double, 6, 1> bl = g.transpose() * ul;
    const auto& d = space.dofs(t);
    for (int i = 0; i < 6; ++i) {
      b(d[i]) += bl(i);
      for (int j = 0; j < 6; ++j) mh(d[i], d[j]) += m(i, j);
    }
  }
  const double expect = std::sqrt(b.dot(mh.lu().solve(b)));
  const double got = discrete_divergence_norm(u, *ops);
  CHECK(got > 0.0);
  CHECK(std::abs(got - expect) < 1e-13 * expect);
}

TEST_CASE("divergence-free fields") {
  const auto ops = fixture::operators(fixture::share(distort_mesh(build_disk_mesh(1.0, 0.1), 0.2, 5)));
  const auto rot = interpolate_vector(ops->vector_space, [](const Point& p) { return Eigen::Vector2d(-p.y(), p.x()); });
  CHECK(discrete_divergence_norm(rot, *ops) < 1e-12);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto psi = random_boundary_zero_streamfunction(ops->scalar_space, seed);
    CHECK(discrete_divergence_norm(balanced_velocity(psi, ops->vector_space), *ops) < 1e-12);
  }
}

TEST_CASE("random streamfunctions") {
  const auto space = std::make_shared<const P2ScalarSpace>(fixture::share(build_disk_mesh(1.0, 0.2)));
  const auto a = random_boundary_zero_streamfunction(space, 7);
  const auto b = random_boundary_zero_streamfunction(space, 7);
  const auto c = random_boundary_zero_streamfunction(space, 8);
  const auto rough = random_boundary_zero_streamfunction(space, 7, 0);
  CHECK(a.coefficients() == b.coefficients());
  CHECK(a.coefficients() != c.coefficients());
  int interior = 0;
  for (int d = 0; d < space->num_dofs(); ++d) {
    if (space->is_boundary_dof(d)) {
      CHECK(a.coefficients()(d) == 0.0);
      CHECK(rough.coefficients()(d) == 0.0);
    } else {
      ++interior;
      CHECK(std::abs(rough.coefficients()(d)) <= 1.0);
    }
  }
  CHECK(interior > 0);
  CHECK(a.coefficients().cwiseAbs().maxCoeff() > 0.0);
  // smoothing reduces roughness
  const auto ops = fixture::operators(space->mesh_ptr());
  auto dirichlet = [&](const ScalarField& f) {
    return f.coefficients().dot(ops->stiffness * f.coefficients()) / f.coefficients().dot(ops->mass_h * f.coefficients());
  };
  CHECK(dirichlet(a) < dirichlet(rough));
}

TEST_CASE("spectrum has a single kernel mode on connected meshes") {
  for (const auto& [name, mesh] : fixture::test_meshes()) {
    CAPTURE(name);
    const auto ops = fixture::operators(mesh);
    const SpectrumReport r = laplacian_spectrum(*ops);
    CHECK(r.near_zero_count == 1);
    CHECK(r.eigenvalues.minCoeff() >= -r.threshold);
    CHECK(r.eigenvalues.size() == ops->scalar_space->num_dofs());
    CHECK(r.gap_ratio >= 1.0);
    CHECK(r.gap_ratio < 5.0);
  }
  const Mesh a = build_rectangle_mesh({0, 1}, {0, 1}, 0.25);
  const Mesh b = build_disk_mesh(1.0, 0.25);
  const auto ops = fixture::operators(fixture::share(disjoint_union(a, b)));
  CHECK(laplacian_spectrum(*ops).near_zero_count == 2);
}

TEST_CASE("square Neumann eigenvalues") {
  const auto ops = fixture::operators(fixture::share(fixture::unit_square(0.1)));
  const SpectrumReport r = laplacian_spectrum(*ops);
  const double pi2 = M_PI * M_PI;
  const double expect[] = {0.0, pi2, pi2, 2 * pi2, 4 * pi2, 4 * pi2};
  CHECK(std::abs(r.eigenvalues(0)) < 1e-8);
  for (int k = 1; k < 6; ++k) CHECK(std::abs(r.eigenvalues(k) - expect[k]) < 0.02 * expect[k]);
}

TEST_CASE("spectrum of L equals spectrum of K") {
  const auto ops = fixture::operators(fixture::share(distort_mesh(build_disk_mesh(1.0, 0.2), 0.2, 30)));
  const auto l = discrete_laplacian(ops->mass_u, ops->gradient);
  const SpectrumReport rk = laplacian_spectrum(*ops);
  const SpectrumReport rl = generalized_spectrum(l.matrix, ops->mass_h.matrix);
  CHECK(rl.near_zero_count == 1);
  CHECK((rk.eigenvalues - rl.eigenvalues).cwiseAbs().maxCoeff() < 1e-9 * rk.lambda_max);
}

TEST_CASE("shift-invert path agrees with the dense solve") {
  const auto ops = fixture::operators(fixture::share(distort_mesh(build_disk_mesh(1.0, 0.2), 0.2, 31)));
  const SpectrumReport dense = laplacian_spectrum(*ops);
  const SpectrumReport si = laplacian_spectrum(*ops, 1e-8, EigenMethod::shift_invert, 6);
  REQUIRE(si.eigenvalues.size() == 6);
  CHECK(si.near_zero_count == 1);
  for (int k = 1; k < 6; ++k) CHECK(std::abs(si.eigenvalues(k) - dense.eigenvalues(k)) < 1e-8 * dense.eigenvalues(k));
  CHECK(std::abs(si.lambda_max - dense.lambda_max) < 1e-3 * dense.lambda_max);
}

TEST_CASE("convergence fits") {
  std::vector<ConvergenceRow> rows;
  for (double h : {0.1, 0.4, 0.2, 0.05}) rows.push_back({h, h * h, 3 * h});
  const ConvergenceTable t = fit_convergence(rows);
  CHECK(std::abs(t.velocity_slope - 2.0) < 1e-10);
  CHECK(std::abs(t.thickness_slope - 1.0) < 1e-10);
  CHECK(t.rows.front().edge_length == 0.4);
  CHECK(t.rows.back().edge_length == 0.05);

  CHECK_THROWS_AS(fit_convergence({{0.4, 1, 1}, {0.2, 1, 1}}), ConfigError);
  CHECK_THROWS_AS(fit_convergence({{0.4, 1, 1}, {0.2, 0, 1}, {0.1, 1, 1}}), ConfigError);
  CHECK_THROWS_AS(fit_convergence({{0.4, 1, 1}, {0.4, 1, 1}, {0.1, 1, 1}}), ConfigError);
  CHECK(std::abs(log_log_slope({1, 2, 4}, {5, 40, 320}) - 3.0) < 1e-12);
}

TEST_CASE("report CSV output") {
  const auto dir = fixture::temp_dir("analysis_csv");
  const auto ops = fixture::operators(fixture::share(fixture::two_triangle_square()));
  const SpectrumReport r = laplacian_spectrum(*ops);
  write_csv(r, dir / "s.csv");
  std::ifstream in(dir / "s.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "index,eigenvalue,near_zero");
  int n = 0;
  while (std::getline(in, line)) ++n;
  CHECK(n == ops->scalar_space->num_dofs());

  write_csv(fit_convergence({{0.4, 0.16, 0.4}, {0.2, 0.04, 0.2}, {0.1, 0.01, 0.1}}), dir / "c.csv");
  std::ifstream cin(dir / "c.csv");
  std::getline(cin, line);
  CHECK(line == "edge_length,velocity_l2_error,thickness_l2_error");
  std::getline(cin, line);
  CHECK(line.rfind("0.4000000000000000", 0) == 0);
}
