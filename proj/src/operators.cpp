#include "swe/operators.hpp"

#include "swe/errors.hpp"

#include <cstdio>

namespace swe {

namespace {

struct ReferenceData {
  QuadratureRule<double> rule = QuadratureRule<double>::strang_fix_degree4();
  P2Tabulation<double> p2 = tabulate_p2_basis(rule);
};

const ReferenceData& reference() {
  static const ReferenceData data;
  return data;
}

Eigen::Matrix3d p1_mass(double area) {
  const auto& ref = reference();
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (Eigen::Index q = 0; q < ref.rule.size(); ++q) {
    const Eigen::Vector3d l = ref.rule.barycentric.row(q).transpose();
    m.noalias() += (2.0 * area * ref.rule.weights(q)) * (l * l.transpose());
  }
  return m;
}

template <class LocalMatrix>
SparseOperator assemble_p2(const P2ScalarSpace& space, LocalMatrix&& local, bool symmetric) {
  const Mesh& mesh = space.mesh();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(36 * static_cast<std::size_t>(mesh.num_triangles()));
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Matrix6d a = local(space.geometry(t));
    const auto& dofs = space.dofs(t);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)  // mirror the upper triangle so K^T = K bit for bit
        triplets.emplace_back(dofs[i], dofs[j], symmetric ? a(std::min(i, j), std::max(i, j)) : a(i, j));
  }
  SparseOperator op;
  op.matrix.resize(space.num_dofs(), space.num_dofs());
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.symmetric = symmetric;
  return op;
}

}  // namespace

Eigen::VectorXd ElementBlockOperator::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(x.size());
  for (int t = 0; t < num_blocks(); ++t) y.segment<6>(6 * t).noalias() = blocks_[t] * x.segment<6>(6 * t);
  return y;
}

Eigen::VectorXd ElementBlockOperator::transpose_times(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(x.size());
  for (int t = 0; t < num_blocks(); ++t)
    y.segment<6>(6 * t).noalias() = blocks_[t].transpose() * x.segment<6>(6 * t);
  return y;
}

SparseMatrix ElementBlockOperator::to_sparse() const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(36 * blocks_.size());
  for (int t = 0; t < num_blocks(); ++t)
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) triplets.emplace_back(6 * t + i, 6 * t + j, blocks_[t](i, j));
  SparseMatrix m(size(), size());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

ElementBlockSolver ElementBlockOperator::factorize() const { return ElementBlockSolver(blocks_); }

ElementBlockSolver::ElementBlockSolver(const std::vector<Matrix6d>& blocks) {
  lu_.reserve(blocks.size());
  for (std::size_t t = 0; t < blocks.size(); ++t) {
    lu_.emplace_back(blocks[t]);
    if (!(lu_.back().rcond() > 1e-14))
      throw NumericalError("element block " + std::to_string(t) + " is singular (degenerate triangle?)");
  }
}

Eigen::VectorXd ElementBlockSolver::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x(rhs.size());
  for (std::size_t t = 0; t < lu_.size(); ++t) x.segment<6>(6 * t) = lu_[t].solve(rhs.segment<6>(6 * t));
  return x;
}

SparseOperator assemble_scalar_mass(const P2ScalarSpace& space) {
  return assemble_p2(
      space,
      [](const TriangleGeometry<double>& geo) {
        const auto& ref = reference();
        Matrix6d a = Matrix6d::Zero();
        for (Eigen::Index q = 0; q < ref.rule.size(); ++q) {
          const Vector6d phi = ref.p2.values.row(q).transpose();
          a.noalias() += (2.0 * geo.area * ref.rule.weights(q)) * (phi * phi.transpose());
        }
        return a;
      },
      true);
}

SparseOperator assemble_stiffness(const P2ScalarSpace& space) {
  return assemble_p2(
      space,
      [](const TriangleGeometry<double>& geo) {
        const auto& ref = reference();
        Matrix6d a = Matrix6d::Zero();
        for (Eigen::Index q = 0; q < ref.rule.size(); ++q) {
          const Eigen::Matrix<double, 6, 2> g = geo.p2_gradients(ref.rule.barycentric.row(q).transpose());
          a.noalias() += (2.0 * geo.area * ref.rule.weights(q)) * (g * g.transpose());
        }
        return a;
      },
      true);
}

ElementBlockOperator assemble_vector_mass(const P1DGVectorSpace& space) {
  std::vector<Matrix6d> blocks(space.mesh().num_triangles());
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const Eigen::Matrix3d m = p1_mass(space.geometry(t).area);
    blocks[t].setZero();
    blocks[t].topLeftCorner<3, 3>() = m;
    blocks[t].bottomRightCorner<3, 3>() = m;
  }
  return ElementBlockOperator(std::move(blocks));
}

ElementBlockOperator assemble_coriolis(const P1DGVectorSpace& space) {
  std::vector<Matrix6d> blocks(space.mesh().num_triangles());
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const Eigen::Matrix3d m = p1_mass(space.geometry(t).area);
    // w . (k x u) = -w_x u_y + w_y u_x
    blocks[t].setZero();
    blocks[t].topRightCorner<3, 3>() = -m;
    blocks[t].bottomLeftCorner<3, 3>() = m;
  }
  return ElementBlockOperator(std::move(blocks));
}

Matrix6d element_gradient(const P1DGVectorSpace& v_space, int t) {
  const auto& ref = reference();
  const auto geo = v_space.geometry(t);
  Matrix6d g = Matrix6d::Zero();
  for (Eigen::Index q = 0; q < ref.rule.size(); ++q) {
    const Eigen::Vector3d l = ref.rule.barycentric.row(q).transpose();
    const Eigen::Matrix<double, 6, 2> grad = geo.p2_gradients(l);
    const double w = 2.0 * geo.area * ref.rule.weights(q);
    g.topRows<3>().noalias() += w * l * grad.col(0).transpose();
    g.bottomRows<3>().noalias() += w * l * grad.col(1).transpose();
  }
  return g;
}

SparseOperator assemble_gradient(const P1DGVectorSpace& v_space, const P2ScalarSpace& s_space) {
  if (&v_space.mesh() != &s_space.mesh()) throw ConfigError("gradient spaces live on different meshes");
  const int nt = v_space.mesh().num_triangles();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(36 * static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    const Matrix6d g = element_gradient(v_space, t);
    const auto& dofs = s_space.dofs(t);
    for (int i = 0; i < 6; ++i)
      for (int a = 0; a < 6; ++a) triplets.emplace_back(6 * t + i, dofs[a], g(i, a));
  }
  SparseOperator op;
  op.matrix.resize(v_space.num_dofs(), s_space.num_dofs());
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

OperatorSet assemble_operators(std::shared_ptr<const Mesh> mesh) {
  OperatorSet ops;
  ops.scalar_space = std::make_shared<const P2ScalarSpace>(mesh);
  ops.vector_space = std::make_shared<const P1DGVectorSpace>(mesh);
  ops.mass_h = assemble_scalar_mass(*ops.scalar_space);
  ops.stiffness = assemble_stiffness(*ops.scalar_space);
  ops.mass_u = assemble_vector_mass(*ops.vector_space);
  ops.coriolis = assemble_coriolis(*ops.vector_space);
  ops.gradient = assemble_gradient(*ops.vector_space, *ops.scalar_space);
  ops.gradient_blocks.reserve(mesh->num_triangles());
  for (int t = 0; t < mesh->num_triangles(); ++t) ops.gradient_blocks.push_back(element_gradient(*ops.vector_space, t));
  return ops;
}

VectorField discrete_gradient(const ElementBlockOperator& mass_u, const SparseOperator& gradient, const ScalarField& h,
                              std::shared_ptr<const P1DGVectorSpace> v_space) {
  Eigen::VectorXd q = mass_u.factorize().solve(gradient * h.coefficients());
  return VectorField(std::move(v_space), std::move(q));
}

SparseOperator discrete_laplacian(const ElementBlockOperator& mass_u, const SparseOperator& gradient) {
  const auto solver = mass_u.factorize();
  std::vector<Matrix6d> inverses(mass_u.num_blocks());
  for (int t = 0; t < mass_u.num_blocks(); ++t) inverses[t] = solver.block(t).inverse();
  const SparseMatrix inverse_mass = ElementBlockOperator(std::move(inverses)).to_sparse();
  SparseOperator op;
  const SparseMatrix gt = gradient.matrix.transpose();
  op.matrix = gt * (inverse_mass * gradient.matrix);
  op.symmetric = true;
  return op;
}

void write_matrix_market(const SparseMatrix& matrix, const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw Error("cannot write " + path.string());
  std::fprintf(f, "%%%%MatrixMarket matrix coordinate real general\n%td %td %td\n", matrix.rows(), matrix.cols(),
               matrix.nonZeros());
  for (Eigen::Index r = 0; r < matrix.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(matrix, r); it; ++it)
      std::fprintf(f, "%td %td %.17g\n", it.row() + 1, it.col() + 1, it.value());
  std::fclose(f);
}

}  // namespace swe
