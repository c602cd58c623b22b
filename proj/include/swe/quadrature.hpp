#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace swe {

/**
 * Quadrature on the reference triangle {(0,0), (1,0), (0,1)}.
 *
 * Points are stored as barycentric coordinates (l0, l1, l2), one row per
 * point, with reference coordinates (xi, eta) = (l1, l2). Weights sum to the
 * reference area 1/2, so on a physical triangle of area A the weights scale
 * by 2A.
 */
template <class Scalar = double>
struct QuadratureRule {
  using Points = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;
  using Weights = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Points barycentric;
  Weights weights;
  int degree = 0;

  Eigen::Index size() const { return weights.size(); }

  /// Symmetric 6-point rule of degree 4, exact for every P2 x P2 product.
  static QuadratureRule strang_fix_degree4() {
    using std::sqrt;
    const Scalar s10 = sqrt(Scalar(10));
    const Scalar root = sqrt(Scalar(38) - Scalar(44) * sqrt(Scalar(2) / Scalar(5)));
    const Scalar a1 = (Scalar(8) - s10 + root) / Scalar(18);
    const Scalar a2 = (Scalar(8) - s10 - root) / Scalar(18);
    const Scalar wroot = sqrt(Scalar(213125) - Scalar(53320) * s10);
    const Scalar w1 = (Scalar(620) + wroot) / Scalar(3720);
    const Scalar w2 = (Scalar(620) - wroot) / Scalar(3720);

    QuadratureRule rule;
    rule.degree = 4;
    rule.barycentric.resize(6, 3);
    rule.weights.resize(6);
    int row = 0;
    for (auto [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
      const Scalar b = Scalar(1) - Scalar(2) * a;
      rule.barycentric.row(row) << b, a, a;
      rule.barycentric.row(row + 1) << a, b, a;
      rule.barycentric.row(row + 2) << a, a, b;
      rule.weights.template segment<3>(row).setConstant(w / Scalar(2));
      row += 3;
    }
    return rule;
  }

  /// Collapsed (Duffy) tensor-product Gauss-Legendre rule of at least the
  /// requested degree; used for error norms against smooth functions.
  static QuadratureRule collapsed_gauss(int min_degree) {
    if (min_degree < 0) throw std::invalid_argument("quadrature degree must be non-negative");
    const int n = (min_degree + 3) / 2;  // 2n - 1 >= min_degree + 1
    const auto [x, w] = gauss_legendre_unit(n);
    QuadratureRule rule;
    rule.degree = 2 * n - 2;
    rule.barycentric.resize(n * n, 3);
    rule.weights.resize(n * n);
    int row = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Scalar xi = x(i);
        const Scalar eta = (Scalar(1) - x(i)) * x(j);
        rule.barycentric.row(row) << Scalar(1) - xi - eta, xi, eta;
        rule.weights(row) = w(i) * w(j) * (Scalar(1) - x(i));
        ++row;
      }
    }
    return rule;
  }

  /// n-point Gauss-Legendre nodes and weights on [0, 1].
  static std::pair<Weights, Weights> gauss_legendre_unit(int n) {
    using std::abs;
    using std::cos;
    Weights nodes(n), weights(n);
    for (int i = 0; i < n; ++i) {
      Scalar x = cos(Scalar(std::numbers::pi) * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
      Scalar dp = 0;
      for (int iter = 0; iter < 100; ++iter) {
        Scalar p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const Scalar p2 = ((Scalar(2 * k - 1)) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
          p0 = p1;
          p1 = p2;
        }
        dp = Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
        const Scalar dx = p1 / dp;
        x -= dx;
        if (abs(dx) < Scalar(1e-16)) break;
      }
      // Recompute the derivative at the converged node.
      Scalar p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Scalar p2 = ((Scalar(2 * k - 1)) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
        p0 = p1;
        p1 = p2;
      }
      dp = Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
      nodes(i) = (Scalar(1) - x) / Scalar(2);
      weights(i) = Scalar(1) / ((Scalar(1) - x * x) * dp * dp);
    }
    return {nodes, weights};
  }
};

}  // namespace swe
