#pragma once

#include "swe/spaces.hpp"

#include <Eigen/LU>
#include <Eigen/SparseCore>

#include <filesystem>
#include <vector>

namespace swe {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

/// Assembled sparse bilinear form. Entries are stored exactly as assembled.
struct SparseOperator {
  SparseMatrix matrix;
  bool symmetric = false;

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const { return matrix * x; }
  Eigen::VectorXd transpose_times(const Eigen::VectorXd& x) const { return matrix.transpose() * x; }
};

class ElementBlockSolver;

/// One dense 6x6 block per triangle over its (x-nodes, y-nodes) velocity dofs.
class ElementBlockOperator {
 public:
  ElementBlockOperator() = default;
  explicit ElementBlockOperator(std::vector<Matrix6d> blocks) : blocks_(std::move(blocks)) {}

  const std::vector<Matrix6d>& blocks() const { return blocks_; }
  const Matrix6d& block(int t) const { return blocks_[t]; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  Eigen::Index size() const { return 6 * static_cast<Eigen::Index>(blocks_.size()); }

  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  Eigen::VectorXd transpose_times(const Eigen::VectorXd& x) const;
  SparseMatrix to_sparse() const;

  /// Per-element LU factorisation. Throws NumericalError naming the first
  /// singular block.
  ElementBlockSolver factorize() const;

 private:
  std::vector<Matrix6d> blocks_;
};

class ElementBlockSolver {
 public:
  explicit ElementBlockSolver(const std::vector<Matrix6d>& blocks);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  const Eigen::PartialPivLU<Matrix6d>& block(int t) const { return lu_[t]; }

 private:
  std::vector<Eigen::PartialPivLU<Matrix6d>> lu_;
};

/*
 * Sign conventions. With N_i the P1DG vector basis and phi_j the P2 basis:
 *
 *   M_h(i, j) = int phi_i phi_j                      SPD
 *   K(i, j)   = int grad phi_i . grad phi_j          SPSD, kernel = constants
 *   M_u       = int N_i . N_j                        block diagonal, SPD
 *   C         = int N_i . (k x N_j), k x u = (-u_y, u_x)   block diagonal, skew
 *   G(i, j)   = int N_i . grad phi_j                 velocity rows, P2 columns
 *
 * The semi-discrete system is
 *   M_u du/dt + (1/Ro) C u + (1/Fr^2) G h = 0
 *   M_h dh/dt - G^T u = 0
 * where G^T u realises int grad phi . u; no boundary integral appears, which
 * is how u.n = 0 enters. 1/Ro and 1/Fr^2 are applied by the time stepper.
 * The composite G^T M_u^{-1} G equals +K.
 */

SparseOperator assemble_scalar_mass(const P2ScalarSpace& space);
SparseOperator assemble_stiffness(const P2ScalarSpace& space);
ElementBlockOperator assemble_vector_mass(const P1DGVectorSpace& space);
ElementBlockOperator assemble_coriolis(const P1DGVectorSpace& space);
SparseOperator assemble_gradient(const P1DGVectorSpace& v_space, const P2ScalarSpace& s_space);

/// Local gradient block of triangle t: rows are the six velocity dofs, columns
/// the six local P2 dofs in basis.hpp order.
Matrix6d element_gradient(const P1DGVectorSpace& v_space, int t);

struct OperatorSet {
  std::shared_ptr<const P2ScalarSpace> scalar_space;
  std::shared_ptr<const P1DGVectorSpace> vector_space;
  SparseOperator mass_h;
  SparseOperator stiffness;
  ElementBlockOperator mass_u;
  ElementBlockOperator coriolis;
  SparseOperator gradient;
  std::vector<Matrix6d> gradient_blocks;
};

OperatorSet assemble_operators(std::shared_ptr<const Mesh> mesh);

/// q = M_u^{-1} G h, element by element.
VectorField discrete_gradient(const ElementBlockOperator& mass_u, const SparseOperator& gradient, const ScalarField& h,
                              std::shared_ptr<const P1DGVectorSpace> v_space);

/// L = G^T M_u^{-1} G formed by sparse products.
SparseOperator discrete_laplacian(const ElementBlockOperator& mass_u, const SparseOperator& gradient);

/// Matrix Market coordinate (real general), 1-based, 17 significant digits.
void write_matrix_market(const SparseMatrix& matrix, const std::filesystem::path& path);

}  // namespace swe
