#pragma once

#include "swe/dynamics.hpp"
#include "swe/operators.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace swe {

/// u = perp-grad psi = (-psi_y, psi_x), evaluated pointwise from each
/// element's local quadratic at its DG nodes.
VectorField balanced_velocity(const ScalarField& psi, std::shared_ptr<const P1DGVectorSpace> v_space);

/// The same velocity from the weak form: M_u u = int w . perp-grad psi.
VectorField weak_balanced_velocity(const ScalarField& psi, const OperatorSet& ops);

/// Geostrophic state (perp-grad psi, (Fr^2 / Ro) psi). With Ro = infinity the
/// thickness is zero.
State balanced_state(const ScalarField& psi, const OperatorSet& ops, const SystemConfig& config, double t = 0.0);

/// M_h-norm of the discrete divergence d = M_h^{-1} G^T u, i.e.
/// sqrt((G^T u)^T M_h^{-1} (G^T u)).
double discrete_divergence_norm(const VectorField& u, const OperatorSet& ops);

/// Interior P2 dofs uniform in [-1, 1], boundary dofs exactly 0, followed by
/// `smoothing` passes of x <- (x + mean of neighbours) / 2 on interior dofs.
ScalarField random_boundary_zero_streamfunction(std::shared_ptr<const P2ScalarSpace> space, std::uint64_t seed,
                                                int smoothing = 2);

struct SpectrumReport {
  Eigen::VectorXd eigenvalues;  ///< ascending
  double threshold = 0.0;       ///< absolute near-zero threshold used
  double lambda_max = 0.0;
  int near_zero_count = 0;
  /// Ratio of the second to the first eigenvalue above threshold (0 if unavailable).
  double gap_ratio = 0.0;
};

enum class EigenMethod { dense, shift_invert };

/// Above this size dense generalized eigensolves are refused.
inline constexpr int dense_eigen_cap = 3000;

/// Eigenvalues of A x = lambda M x (A symmetric semidefinite, M SPD).
/// Near-zero means lambda < relative_threshold * lambda_max. The dense path
/// returns the full spectrum; shift_invert returns the `count` smallest and
/// estimates lambda_max by power iteration.
SpectrumReport generalized_spectrum(const SparseMatrix& a, const SparseMatrix& m, double relative_threshold = 1e-8,
                                    EigenMethod method = EigenMethod::dense, int count = 10);

inline SpectrumReport laplacian_spectrum(const OperatorSet& ops, double relative_threshold = 1e-8,
                                         EigenMethod method = EigenMethod::dense, int count = 10) {
  return generalized_spectrum(ops.stiffness.matrix, ops.mass_h.matrix, relative_threshold, method, count);
}

struct ConvergenceRow {
  double edge_length = 0.0;
  double velocity_error = 0.0;
  double thickness_error = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double velocity_slope = 0.0;
  double thickness_slope = 0.0;
};

/// Least-squares slope of log(error) against log(edge length) per column.
/// Rows are sorted by decreasing edge length; needs >= 3 distinct edge
/// lengths and strictly positive errors.
ConvergenceTable fit_convergence(std::vector<ConvergenceRow> rows);

/// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

void write_csv(const SpectrumReport& report, const std::filesystem::path& path);
void write_csv(const ConvergenceTable& table, const std::filesystem::path& path);

}  // namespace swe
