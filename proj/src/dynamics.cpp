#include "swe/dynamics.hpp"

#include "swe/errors.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <cmath>

namespace swe {

void SystemConfig::validate() const {
  if (!(rossby > 0.0)) throw ConfigError("Rossby number must be positive (or infinite)");
  if (!(froude > 0.0) || std::isinf(froude)) throw ConfigError("Froude number must be positive and finite");
  if (!(dt > 0.0) || std::isinf(dt)) throw ConfigError("time step must be positive");
  if (theta != 0.5) throw ConfigError("only theta = 1/2 (Crank-Nicolson) is supported");
}

State zero_state(const OperatorSet& ops, double t) {
  return State{VectorField(ops.vector_space), ScalarField(ops.scalar_space), t};
}

SchurSystem::SchurSystem(std::shared_ptr<const OperatorSet> ops, const SystemConfig& config, StepperOptions options)
    : ops_(std::move(ops)), config_(config), options_(options) {
  config_.validate();
  dt_ = options_.backward ? -config_.dt : config_.dt;
  const double half = 0.5 * dt_;
  const double coriolis = half * config_.inverse_rossby();
  const double gravity = half * half * config_.inverse_froude_squared();
  const int nt = ops_->mass_u.num_blocks();

  a_blocks_.resize(nt);
  b_blocks_.resize(nt);
  a_lu_.reserve(nt);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(36 * static_cast<std::size_t>(nt));
  const auto& space = *ops_->scalar_space;
  for (int t = 0; t < nt; ++t) {
    const Matrix6d& m = ops_->mass_u.block(t);
    if (coriolis == 0.0) {
      a_blocks_[t] = m;
      b_blocks_[t] = m;
    } else {
      a_blocks_[t] = m + coriolis * ops_->coriolis.block(t);
      b_blocks_[t] = m - coriolis * ops_->coriolis.block(t);
    }
    a_lu_.emplace_back(a_blocks_[t]);
    if (!(a_lu_.back().rcond() > 1e-14))
      throw NumericalError("velocity block of element " + std::to_string(t) + " is singular");
    const Matrix6d& g = ops_->gradient_blocks[t];
    const Matrix6d local = gravity * (g.transpose() * a_lu_.back().solve(g));
    const auto& dofs = space.dofs(t);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) triplets.emplace_back(dofs[i], dofs[j], local(i, j));
  }
  SparseMatrix coupling(space.num_dofs(), space.num_dofs());
  coupling.setFromTriplets(triplets.begin(), triplets.end());
  schur_ = ops_->mass_h.matrix + coupling;
  schur_colmajor_ = schur_;
  schur_colmajor_.makeCompressed();

  direct_ = options_.solver == SchurSolverKind::direct ||
            (options_.solver == SchurSolverKind::automatic && space.num_dofs() <= options_.direct_dof_limit);
  if (direct_) {
    lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    lu_->analyzePattern(schur_colmajor_);
    lu_->factorize(schur_colmajor_);
    if (lu_->info() != Eigen::Success) throw NumericalError("Schur factorisation failed: " + lu_->lastErrorMessage());
  }
}

Eigen::VectorXd SchurSystem::solve_schur(const Eigen::VectorXd& rhs) const {
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return Eigen::VectorXd::Zero(rhs.size());
  Eigen::VectorXd x;
  if (direct_) {
    x = lu_->solve(rhs);
    // A couple of refinement sweeps pull the residual to roundoff level.
    for (int sweep = 0; sweep < 3; ++sweep) {
      const Eigen::VectorXd r = rhs - schur_colmajor_ * x;
      if (r.norm() <= options_.tolerance * rhs_norm) break;
      x += lu_->solve(r);
    }
  } else {
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
    solver.setTolerance(options_.tolerance);
    solver.setMaxIterations(10000);
    solver.compute(schur_colmajor_);
    x = solver.solve(rhs);
  }
  const double residual = (rhs - schur_colmajor_ * x).norm() / rhs_norm;
  if (!(residual <= options_.tolerance))
    throw NumericalError("Schur solve did not converge (relative residual " + std::to_string(residual) + ")");
  return x;
}

State SchurSystem::step(const State& state) const {
  const auto& ops = *ops_;
  const Eigen::VectorXd& u = state.u.coefficients();
  const Eigen::VectorXd& h = state.h.coefficients();
  const double half = 0.5 * dt_;
  const double pressure = half * config_.inverse_froude_squared();

  Eigen::VectorXd r_u = ops.gradient * h;
  r_u *= -pressure;
  for (int t = 0; t < static_cast<int>(b_blocks_.size()); ++t)
    r_u.segment<6>(6 * t).noalias() += b_blocks_[t] * u.segment<6>(6 * t);
  Eigen::VectorXd a_inv_r(r_u.size());
  for (int t = 0; t < static_cast<int>(a_lu_.size()); ++t)
    a_inv_r.segment<6>(6 * t) = a_lu_[t].solve(r_u.segment<6>(6 * t));

  Eigen::VectorXd rhs = ops.mass_h * h;
  rhs.noalias() += half * ops.gradient.transpose_times(u + a_inv_r);
  Eigen::VectorXd h_next = solve_schur(rhs);

  Eigen::VectorXd u_rhs = ops.gradient * h_next;
  u_rhs = r_u - pressure * u_rhs;
  Eigen::VectorXd u_next(u.size());
  for (int t = 0; t < static_cast<int>(a_lu_.size()); ++t)
    u_next.segment<6>(6 * t) = a_lu_[t].solve(u_rhs.segment<6>(6 * t));

  return State{VectorField(state.u.space_ptr(), std::move(u_next)), ScalarField(state.h.space_ptr(), std::move(h_next)),
               state.t + dt_};
}

SchurSystem build_stepper(std::shared_ptr<const OperatorSet> ops, const SystemConfig& config, StepperOptions options) {
  return SchurSystem(std::move(ops), config, options);
}

State run(const SchurSystem& system, State state, double t_end, const Observer& observer, long interval_steps) {
  const double dt = system.signed_dt();
  const double span = t_end - state.t;
  if (span * dt < 0.0) throw ConfigError("t_end lies behind the current time");
  const long steps = std::lround(span / dt);
  if (observer) observer(state, 0);
  const double t0 = state.t;
  for (long n = 1; n <= steps; ++n) {
    state = system.step(state);
    state.t = t0 + static_cast<double>(n) * dt;
    if (observer && interval_steps > 0 && (n % interval_steps == 0 || n == steps)) observer(state, n);
  }
  return state;
}

double energy(const State& state, const OperatorSet& ops, const SystemConfig& config) {
  const auto& u = state.u.coefficients();
  const auto& h = state.h.coefficients();
  return 0.5 * (u.dot(ops.mass_u * u) + config.inverse_froude_squared() * h.dot(ops.mass_h * h));
}

}  // namespace swe
