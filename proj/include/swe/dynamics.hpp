#pragma once

#include "swe/operators.hpp"

#include <Eigen/SparseLU>

#include <functional>
#include <limits>
#include <memory>

namespace swe {

/// Nondimensional parameters of the linear rotating shallow-water system.
/// Ro may be +infinity (non-rotating limit: the Coriolis term drops).
struct SystemConfig {
  double rossby = 0.1;
  double froude = 1.0;
  double dt = 0.01;
  double t_end = 1.0;
  double theta = 0.5;

  static constexpr double no_rotation = std::numeric_limits<double>::infinity();

  double inverse_rossby() const { return std::isinf(rossby) ? 0.0 : 1.0 / rossby; }
  double inverse_froude_squared() const { return 1.0 / (froude * froude); }
  /// Throws ConfigError unless Ro > 0, Fr > 0, dt > 0 and theta = 1/2.
  void validate() const;
};

struct State {
  VectorField u;
  ScalarField h;
  double t = 0.0;
};

State zero_state(const OperatorSet& ops, double t = 0.0);

enum class SchurSolverKind { automatic, direct, iterative };

struct StepperOptions {
  SchurSolverKind solver = SchurSolverKind::automatic;
  /// automatic switches to the iterative solver above this many P2 dofs.
  int direct_dof_limit = 400000;
  double tolerance = 1e-12;
  /// Reverses time (steps by -dt); used for reversibility checks.
  bool backward = false;
};

/**
 * Crank-Nicolson stepper with the velocity eliminated element by element.
 *
 * Per step, with A = M_u + (dt/2)/Ro C and B = M_u - (dt/2)/Ro C,
 *   r_u = B u - (dt/2)/Fr^2 G h,    r_h = M_h h + (dt/2) G^T u,
 *   S h' = r_h + (dt/2) G^T A^{-1} r_u,   S = M_h + (dt/2)^2/Fr^2 G^T A^{-1} G,
 *   u' = A^{-1} (r_u - (dt/2)/Fr^2 G h').
 * S has the sparsity of M_h and is factorised once.
 */
class SchurSystem {
 public:
  SchurSystem(std::shared_ptr<const OperatorSet> ops, const SystemConfig& config, StepperOptions options = {});

  State step(const State& state) const;

  const OperatorSet& operators() const { return *ops_; }
  const SystemConfig& config() const { return config_; }
  double signed_dt() const { return dt_; }
  const Matrix6d& element_system(int t) const { return a_blocks_[t]; }
  const SparseMatrix& schur_matrix() const { return schur_; }
  bool uses_direct_solver() const { return direct_; }

 private:
  Eigen::VectorXd solve_schur(const Eigen::VectorXd& rhs) const;

  std::shared_ptr<const OperatorSet> ops_;
  SystemConfig config_;
  StepperOptions options_;
  double dt_;
  std::vector<Matrix6d> a_blocks_;
  std::vector<Matrix6d> b_blocks_;
  std::vector<Eigen::PartialPivLU<Matrix6d>> a_lu_;
  SparseMatrix schur_;
  Eigen::SparseMatrix<double> schur_colmajor_;
  bool direct_ = true;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

SchurSystem build_stepper(std::shared_ptr<const OperatorSet> ops, const SystemConfig& config,
                          StepperOptions options = {});

inline State step(const SchurSystem& system, const State& state) { return system.step(state); }

/// Called for the initial state, after every `interval_steps` steps and after the last step.
using Observer = std::function<void(const State&, long step)>;

/// Steps until t_end (within dt/2). t_end == state.t performs no steps.
State run(const SchurSystem& system, State state, double t_end, const Observer& observer = {},
          long interval_steps = 1);

/// 1/2 (u^T M_u u + 1/Fr^2 h^T M_h h)
double energy(const State& state, const OperatorSet& ops, const SystemConfig& config);

}  // namespace swe
