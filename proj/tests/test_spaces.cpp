#include "fixtures.hpp"
#include "oracles.hpp"

#include "swe/quadrature.hpp"
#include "swe/random.hpp"
#include "swe/spaces.hpp"

#include <doctest.h>

#include <cmath>

using namespace swe;

namespace {

double reference_monomial(int a, int b) {
  return oracle::factorial(a) * oracle::factorial(b) / oracle::factorial(a + b + 2);
}

double rule_monomial(const QuadratureRule<double>& rule, int a, int b) {
  double s = 0.0;
  for (Eigen::Index q = 0; q < rule.size(); ++q)
    s += rule.weights(q) * std::pow(rule.barycentric(q, 1), a) * std::pow(rule.barycentric(q, 2), b);
  return s;
}

double evaluate_poly(const oracle::BaryPoly& p, const Eigen::Vector3d& l) {
  double s = 0.0;
  for (const auto& [e, c] : p) s += c * std::pow(l(0), e[0]) * std::pow(l(1), e[1]) * std::pow(l(2), e[2]);
  return s;
}

// Error oracle: each triangle split into 4^levels pieces, each integrated with
// the edge-midpoint rule; the interpolant is evaluated from the oracle basis.
double subdivided_l2_error(const ScalarField& field, const ScalarFunction& exact, int levels) {
  const auto& space = field.space();
  const Mesh& mesh = space.mesh();
  const int n = 1 << levels;
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto el = oracle::element(mesh, t);
    const auto& dofs = space.dofs(t);
    auto value = [&](const Eigen::Vector3d& l) {
      double v = 0.0;
      for (int i = 0; i < 6; ++i) v += field.coefficients()(dofs[i]) * evaluate_poly(oracle::p2(i), l);
      return v;
    };
    auto sub = [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
      const double area = el.area / (n * n);
      for (const Eigen::Vector3d& m : {Eigen::Vector3d(0.5 * (a + b)), Eigen::Vector3d(0.5 * (b + c)),
                                       Eigen::Vector3d(0.5 * (c + a))}) {
        const Point x = m(0) * el.v[0] + m(1) * el.v[1] + m(2) * el.v[2];
        const double e = value(m) - exact(x);
        sum += area / 3.0 * e * e;
      }
    };
    for (int i = 0; i < n; ++i)
      for (int j = 0; i + j < n; ++j) {
        auto bary = [&](int p, int q) { return Eigen::Vector3d(1.0 - double(p + q) / n, double(p) / n, double(q) / n); };
        sub(bary(i, j), bary(i + 1, j), bary(i, j + 1));
        if (i + j + 1 < n) sub(bary(i + 1, j), bary(i + 1, j + 1), bary(i, j + 1));
      }
  }
  return std::sqrt(sum);
}

}  // namespace

TEST_CASE("quadrature rules integrate monomials exactly") {
  const auto sf = QuadratureRule<double>::strang_fix_degree4();
  CHECK(sf.degree == 4);
  CHECK(std::abs(sf.weights.sum() - 0.5) < 1e-15);
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b) CHECK(std::abs(rule_monomial(sf, a, b) - reference_monomial(a, b)) < 1e-15);
  CHECK(std::abs(rule_monomial(sf, 5, 0) - reference_monomial(5, 0)) > 1e-8);  // degree is sharp

  for (int d : {0, 3, 8, 13}) {
    const auto cg = QuadratureRule<double>::collapsed_gauss(d);
    CHECK(cg.degree >= d);
    CHECK(std::abs(cg.weights.sum() - 0.5) < 1e-14);
    for (int a = 0; a <= cg.degree; ++a)
      for (int b = 0; a + b <= cg.degree; ++b)
        CHECK(std::abs(rule_monomial(cg, a, b) - reference_monomial(a, b)) < 1e-15);
    for (Eigen::Index q = 0; q < cg.size(); ++q) CHECK(cg.barycentric.row(q).minCoeff() > 0.0);
  }
}

TEST_CASE("P2 basis tabulation") {
  const auto rule = QuadratureRule<double>::collapsed_gauss(6);
  const auto tab = tabulate_p2_basis(rule);
  for (Eigen::Index q = 0; q < rule.size(); ++q) {
    CHECK(std::abs(tab.values.row(q).sum() - 1.0) < 1e-14);
    CHECK(std::abs(tab.gradients[0].row(q).sum()) < 1e-14);
    CHECK(std::abs(tab.gradients[1].row(q).sum()) < 1e-14);
    const Eigen::Vector3d l = rule.barycentric.row(q).transpose();
    for (int i = 0; i < 6; ++i) CHECK(std::abs(tab.values(q, i) - evaluate_poly(oracle::p2(i), l)) < 1e-15);
  }
  const auto nodes = p2_nodes<double>();
  for (int n = 0; n < 6; ++n) {
    const auto v = p2_values<double>(nodes.row(n).transpose());
    for (int i = 0; i < 6; ++i) CHECK(v(i) == doctest::Approx(i == n ? 1.0 : 0.0).epsilon(1e-15));
  }
}

TEST_CASE("dof maps") {
  const auto mesh = fixture::share(distort_mesh(build_disk_mesh(1.0, 0.25), 0.2, 4));
  const auto s = std::make_shared<const P2ScalarSpace>(mesh);
  CHECK(s->num_dofs() == mesh->num_vertices() + mesh->num_edges());
  for (int t = 0; t < mesh->num_triangles(); ++t) {
    const auto el = oracle::element(*mesh, t);
    const auto pts = oracle::p2_node_points(el);
    for (int i = 0; i < 6; ++i) CHECK((s->node_coordinates()[s->dofs(t)[i]] - pts[i]).norm() < 1e-15);
  }
  int boundary = 0;
  for (int d = 0; d < s->num_dofs(); ++d) boundary += s->is_boundary_dof(d);
  CHECK(boundary == 2 * static_cast<int>(mesh->boundary_edges().size()));

  const auto v = std::make_shared<const P1DGVectorSpace>(mesh);
  CHECK(v->num_dofs() == 6 * mesh->num_triangles());
  CHECK(P1DGVectorSpace::dof(2, 1, 0) == 15);
  CHECK_THROWS(ScalarField(s, Eigen::VectorXd::Zero(3)));
}

TEST_CASE("interpolation reproduces the polynomial spaces") {
  const auto mesh = fixture::share(distort_mesh(build_disk_mesh(1.0, 0.25), 0.2, 8));
  const auto s = std::make_shared<const P2ScalarSpace>(mesh);
  const auto v = std::make_shared<const P1DGVectorSpace>(mesh);

  const auto one = interpolate_scalar(s, [](const Point&) { return 1.0; });
  CHECK(one.coefficients().isOnes());

  auto f = [](const Point& p) { return p.x() * p.x() + 3.0 * p.y(); };
  const auto q = interpolate_scalar(s, f);
  Random rng(3);
  for (int t = 0; t < mesh->num_triangles(); ++t) {
    Eigen::Vector3d l(rng.uniform(), rng.uniform(), 0.0);
    if (l(0) + l(1) > 1.0) l.head<2>() = Eigen::Vector2d(1.0, 1.0) - l.head<2>();
    l(2) = 1.0 - l(0) - l(1);
    const auto el = oracle::element(*mesh, t);
    const Point x = l(0) * el.v[0] + l(1) * el.v[1] + l(2) * el.v[2];
    CHECK(std::abs(evaluate(q, t, l) - f(x)) < 1e-12);
  }
  CHECK(l2_error(q, f) < 1e-12);

  const auto ex = interpolate_vector(v, [](const Point&) { return Eigen::Vector2d(1.0, 0.0); });
  for (int t = 0; t < mesh->num_triangles(); ++t)
    for (int i = 0; i < 3; ++i) {
      CHECK(ex.coefficients()(P1DGVectorSpace::dof(t, 0, i)) == 1.0);
      CHECK(ex.coefficients()(P1DGVectorSpace::dof(t, 1, i)) == 0.0);
    }
  auto rot = [](const Point& p) { return Eigen::Vector2d(p.y(), -p.x()); };
  const auto r = interpolate_vector(v, rot);
  CHECK(l2_error(r, rot) < 1e-12);
  const Eigen::Vector3d centroid(1.0 / 3, 1.0 / 3, 1.0 / 3);
  for (int t = 0; t < mesh->num_triangles(); ++t) {
    const auto el = oracle::element(*mesh, t);
    CHECK((evaluate(r, t, centroid) - rot((el.v[0] + el.v[1] + el.v[2]) / 3.0)).norm() < 1e-14);
  }
}

TEST_CASE("vector fields are discontinuous across elements") {
  const auto mesh = fixture::share(fixture::two_triangle_square());
  const auto v = std::make_shared<const P1DGVectorSpace>(mesh);
  VectorField u(v);
  u.coefficients().segment<6>(0).setConstant(1.0);
  u.coefficients().segment<6>(6).setConstant(-1.0);
  // vertex 0 is shared; each element keeps its own value
  CHECK(evaluate(u, 0, Eigen::Vector3d(1, 0, 0)).x() == 1.0);
  CHECK(evaluate(u, 1, Eigen::Vector3d(1, 0, 0)).x() == -1.0);
}

TEST_CASE("L2 norms and errors") {
  const auto mesh = fixture::share(fixture::unit_square(0.1));
  const auto s = std::make_shared<const P2ScalarSpace>(mesh);
  const auto two = interpolate_scalar(s, [](const Point&) { return 2.0; });
  CHECK(std::abs(l2_norm(two) - 2.0) < 1e-12);
  CHECK(std::abs(l2_error(two, [](const Point&) { return 0.0; }) - 2.0) < 1e-12);

  auto sine = [](const Point& p) { return std::sin(M_PI * p.x()); };
  const auto si = interpolate_scalar(s, sine);
  const double err = l2_error(si, sine);
  const double ref = subdivided_l2_error(si, sine, 4);
  CHECK(err > 0.0);
  CHECK(std::abs(err - ref) < 5e-4 * ref);  // 3 significant figures
}

TEST_CASE("interpolation error of the channel wave under refinement") {
  auto f = [](const Point& p) { return std::exp(-p.y() / 0.1) * std::exp(-(p.x() - 5.0) * (p.x() - 5.0)); };
  const Mesh coarse = build_rectangle_mesh({-15, 15}, {0, 3}, 0.2);
  const auto s0 = std::make_shared<const P2ScalarSpace>(fixture::share(coarse));
  const auto s1 = std::make_shared<const P2ScalarSpace>(fixture::share(refine_uniform(coarse)));
  const double e0 = l2_error(interpolate_scalar(s0, f), f);
  const double e1 = l2_error(interpolate_scalar(s1, f), f);
  MESSAGE("interpolation error ratio " << e0 / e1);
  CHECK(e0 / e1 > 4.0);
  CHECK(e0 / e1 < 9.0);
}
