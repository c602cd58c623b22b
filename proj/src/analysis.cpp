#include "swe/analysis.hpp"

#include "swe/errors.hpp"
#include "swe/io.hpp"
#include "swe/random.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <set>

namespace swe {

VectorField balanced_velocity(const ScalarField& psi, std::shared_ptr<const P1DGVectorSpace> v_space) {
  const auto& space = psi.space();
  const Mesh& mesh = space.mesh();
  Eigen::VectorXd u(v_space->num_dofs());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto geo = space.geometry(t);
    Vector6d local;
    for (int a = 0; a < 6; ++a) local(a) = psi.coefficients()(space.dofs(t)[a]);
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector2d grad = geo.p2_gradients(Eigen::Vector3d::Unit(i)).transpose() * local;
      u(P1DGVectorSpace::dof(t, 0, i)) = -grad.y();
      u(P1DGVectorSpace::dof(t, 1, i)) = grad.x();
    }
  }
  return VectorField(std::move(v_space), std::move(u));
}

VectorField weak_balanced_velocity(const ScalarField& psi, const OperatorSet& ops) {
  const Eigen::VectorXd g = ops.gradient * psi.coefficients();
  Eigen::VectorXd perp(g.size());
  for (int t = 0; t < ops.mass_u.num_blocks(); ++t) {
    perp.segment<3>(6 * t) = -g.segment<3>(6 * t + 3);
    perp.segment<3>(6 * t + 3) = g.segment<3>(6 * t);
  }
  return VectorField(ops.vector_space, ops.mass_u.factorize().solve(perp));
}

State balanced_state(const ScalarField& psi, const OperatorSet& ops, const SystemConfig& config, double t) {
  const double scale = config.inverse_rossby() * config.froude * config.froude;
  return State{balanced_velocity(psi, ops.vector_space), ScalarField(ops.scalar_space, scale * psi.coefficients()), t};
}

double discrete_divergence_norm(const VectorField& u, const OperatorSet& ops) {
  const Eigen::VectorXd b = ops.gradient.transpose_times(u.coefficients());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> mass(ops.mass_h.matrix);
  if (mass.info() != Eigen::Success) throw NumericalError("scalar mass factorisation failed");
  const Eigen::VectorXd d = mass.solve(b);
  return std::sqrt(std::max(0.0, b.dot(d)));
}

ScalarField random_boundary_zero_streamfunction(std::shared_ptr<const P2ScalarSpace> space, std::uint64_t seed,
                                                int smoothing) {
  const int n = space->num_dofs();
  Random rng(seed);
  Eigen::VectorXd psi(n);
  for (int d = 0; d < n; ++d) {
    const double value = rng.uniform(-1.0, 1.0);
    psi(d) = space->is_boundary_dof(d) ? 0.0 : value;
  }
  if (smoothing > 0) {
    std::vector<std::set<int>> neighbours(n);
    for (int t = 0; t < space->mesh().num_triangles(); ++t)
      for (int a : space->dofs(t))
        for (int b : space->dofs(t))
          if (a != b) neighbours[a].insert(b);
    for (int pass = 0; pass < smoothing; ++pass) {
      Eigen::VectorXd next = psi;
      for (int d = 0; d < n; ++d) {
        if (space->is_boundary_dof(d)) continue;
        double mean = 0.0;
        for (int b : neighbours[d]) mean += psi(b);
        mean /= static_cast<double>(neighbours[d].size());
        next(d) = 0.5 * (psi(d) + mean);
      }
      psi = std::move(next);
    }
  }
  return ScalarField(std::move(space), std::move(psi));
}

namespace {

void classify(SpectrumReport& report, double relative_threshold) {
  report.threshold = relative_threshold * report.lambda_max;
  report.near_zero_count = 0;
  std::vector<double> physical;
  for (double lambda : report.eigenvalues) {
    if (lambda < report.threshold)
      ++report.near_zero_count;
    else
      physical.push_back(lambda);
  }
  report.gap_ratio = physical.size() >= 2 ? physical[1] / physical[0] : 0.0;
}

SpectrumReport dense_spectrum(const SparseMatrix& a, const SparseMatrix& m) {
  Eigen::MatrixXd ad = Eigen::MatrixXd(a);
  ad = 0.5 * (ad + ad.transpose()).eval();
  Eigen::MatrixXd md = Eigen::MatrixXd(m);
  md = 0.5 * (md + md.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(ad, md, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("dense generalized eigensolve failed");
  SpectrumReport report;
  report.eigenvalues = solver.eigenvalues();
  report.lambda_max = report.eigenvalues.maxCoeff();
  return report;
}

// Subspace iteration on (A - sigma M)^{-1} M with Rayleigh-Ritz, sigma < 0 so
// the shifted matrix stays SPD for semidefinite A.
SpectrumReport shift_invert_spectrum(const SparseMatrix& a, const SparseMatrix& m, int count) {
  const Eigen::SparseMatrix<double> ac = a, mc = m;
  const Eigen::Index n = a.rows();
  const int block = std::min<Eigen::Index>(n, count + 6);

  // Power iteration on M^{-1} A for lambda_max.
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> mass(mc);
  if (mass.info() != Eigen::Success) throw NumericalError("mass factorisation failed");
  Random rng(12345);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.uniform(-1.0, 1.0);
  double lambda_max = 0.0;
  for (int iter = 0; iter < 2000; ++iter) {
    Eigen::VectorXd w = mass.solve(ac * v);
    const double estimate = v.dot(ac * v) / v.dot(mc * v);
    v = w / w.norm();
    if (iter > 10 && std::abs(estimate - lambda_max) < 1e-10 * std::abs(estimate)) {
      lambda_max = estimate;
      break;
    }
    lambda_max = estimate;
  }

  const double sigma = -1e-3 * lambda_max;
  Eigen::SparseMatrix<double> shifted = ac - sigma * mc;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
  if (solver.info() != Eigen::Success) throw NumericalError("shifted factorisation failed");

  Eigen::MatrixXd x(n, block);
  for (Eigen::Index j = 0; j < block; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = rng.uniform(-1.0, 1.0);
  Eigen::VectorXd previous = Eigen::VectorXd::Constant(block, std::numeric_limits<double>::infinity());
  Eigen::VectorXd values;
  for (int iter = 0; iter < 1000; ++iter) {
    Eigen::MatrixXd y = solver.solve(mc * x);
    const Eigen::MatrixXd ay = ac * y, my = mc * y;
    Eigen::MatrixXd ar = y.transpose() * ay, mr = y.transpose() * my;
    ar = 0.5 * (ar + ar.transpose()).eval();
    mr = 0.5 * (mr + mr.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(ar, mr);
    if (ritz.info() != Eigen::Success) throw NumericalError("Rayleigh-Ritz eigensolve failed");
    values = ritz.eigenvalues();
    x = y * ritz.eigenvectors();
    const double scale = std::max(1.0, values.head(count).cwiseAbs().maxCoeff());
    if ((values.head(count) - previous.head(count)).cwiseAbs().maxCoeff() < 1e-12 * scale) break;
    previous = values;
  }
  SpectrumReport report;
  report.eigenvalues = values.head(count);
  report.lambda_max = lambda_max;
  return report;
}

}  // namespace

SpectrumReport generalized_spectrum(const SparseMatrix& a, const SparseMatrix& m, double relative_threshold,
                                    EigenMethod method, int count) {
  if (a.rows() != m.rows() || a.rows() != a.cols() || m.rows() != m.cols())
    throw ConfigError("generalized eigenproblem needs square matrices of equal size");
  SpectrumReport report;
  if (method == EigenMethod::dense) {
    if (a.rows() > dense_eigen_cap)
      throw ConfigError("dense eigensolve refused above " + std::to_string(dense_eigen_cap) + " dofs (got " +
                        std::to_string(a.rows()) + ")");
    report = dense_spectrum(a, m);
  } else {
    if (count < 1 || count >= a.rows()) throw ConfigError("eigenvalue count out of range");
    report = shift_invert_spectrum(a, m, count);
  }
  classify(report, relative_threshold);
  return report;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::log(x[i]);
    rhs(i) = std::log(y[i]);
  }
  return design.colPivHouseholderQr().solve(rhs)(1);
}

ConvergenceTable fit_convergence(std::vector<ConvergenceRow> rows) {
  if (rows.size() < 3) throw ConfigError("convergence fit needs at least 3 rows");
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.edge_length > b.edge_length; });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!(r.edge_length > 0.0)) throw ConfigError("edge lengths must be positive");
    if (i > 0 && !(r.edge_length < rows[i - 1].edge_length)) throw ConfigError("edge lengths must be distinct");
    if (!(r.velocity_error > 0.0) || !(r.thickness_error > 0.0))
      throw ConfigError("convergence errors must be strictly positive");
  }
  std::vector<double> h, eu, eh;
  for (const auto& r : rows) {
    h.push_back(r.edge_length);
    eu.push_back(r.velocity_error);
    eh.push_back(r.thickness_error);
  }
  ConvergenceTable table;
  table.rows = std::move(rows);
  table.velocity_slope = log_log_slope(h, eu);
  table.thickness_slope = log_log_slope(h, eh);
  return table;
}

void write_csv(const SpectrumReport& report, const std::filesystem::path& path) {
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i) {
    const double lambda = report.eigenvalues(i);
    rows.push_back({static_cast<double>(i), lambda, lambda < report.threshold ? 1.0 : 0.0});
  }
  write_csv_timeseries({"index", "eigenvalue", "near_zero"}, rows, path);
}

void write_csv(const ConvergenceTable& table, const std::filesystem::path& path) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : table.rows) rows.push_back({r.edge_length, r.velocity_error, r.thickness_error});
  write_csv_timeseries({"edge_length", "velocity_l2_error", "thickness_l2_error"}, rows, path);
}

}  // namespace swe
