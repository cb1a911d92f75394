#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "pvem/geometry.hpp"
#include "pvem/polynomial_basis.hpp"
#include "pvem/projectors.hpp"

namespace pvem {

/// Compressed row storage with sorted column indices.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

using ScalarField = std::function<double(Point2)>;
using SpaceTimeField = std::function<double(Point2, double)>;

/// Stabilizer recipe for the local forms. Only the dof-identity recipe
/// (|P| I for the mass form, I for the stiffness form) is provided.
enum class Stabilizer { kDofIdentity };

struct AssemblyOptions {
  QuadratureOrder load_order = QuadratureOrder::kDegree4;
  Stabilizer stabilizer = Stabilizer::kDofIdentity;
};

/// Everything computed on one cell.
struct ElementOperators {
  std::size_t cell_id = 0;
  ElementGeometry geometry;
  ScaledMonomialBasis basis{Point2{}, 1.0};
  Eigen::Matrix3d H;
  Eigen::Matrix3d G;
  DofMatrix D;
  ProjectorMatrix oblique;   // (D^T D)^{-1} D^T
  ProjectorMatrix elliptic;  // Pi^nabla
  Eigen::MatrixXd mass;
  Eigen::MatrixXd stiffness;
};

/// M_P = Pi~^T H Pi~ + |P| (I - D Pi~)^T (I - D Pi~).
Eigen::MatrixXd local_mass(const Eigen::Matrix3d& h, const DofMatrix& d, const ProjectorMatrix& oblique,
                           double area);

/// K_P = Pi^T G Pi + (I - D Pi)^T (I - D Pi), Pi the elliptic projector.
Eigen::MatrixXd local_stiffness(const Eigen::Matrix3d& g, const DofMatrix& d, const ProjectorMatrix& elliptic);

/// Moments (integral of m_k f over P), k = 0..2, by fan quadrature.
Eigen::Vector3d load_moments(std::span<const Point2> polygon, const ScaledMonomialBasis& basis, const ScalarField& f,
                             QuadratureOrder order = QuadratureOrder::kDegree4);

/// b_P = Pi~^T (integral of m_k f over P).
Eigen::VectorXd local_load(std::span<const Point2> polygon, const ScaledMonomialBasis& basis, const ScalarField& f,
                           const ProjectorMatrix& oblique, QuadratureOrder order = QuadratureOrder::kDegree4);

ElementOperators build_element_operators(const PolygonalMesh& mesh, std::size_t cell_id,
                                         const AssemblyOptions& options = {});

std::vector<ElementOperators> build_all_element_operators(const PolygonalMesh& mesh,
                                                          const AssemblyOptions& options = {});

struct GlobalSystem {
  SparseMatrix mass;
  SparseMatrix stiffness;
  /// Interior vertices in increasing order.
  std::vector<std::size_t> free_dofs;
  /// Position of a vertex in free_dofs, or -1 for boundary vertices.
  std::vector<std::ptrdiff_t> free_index;

  std::size_t num_dofs() const { return free_index.size(); }
  std::size_t num_free() const { return free_dofs.size(); }
};

/// Scatters local mass and stiffness blocks in cell order.
GlobalSystem assemble_global(const PolygonalMesh& mesh, std::span<const ElementOperators> elements);

/// Global load vector of f(., t) (full dof numbering).
Eigen::VectorXd assemble_load(const PolygonalMesh& mesh, std::span<const ElementOperators> elements,
                              const ScalarField& f, QuadratureOrder order = QuadratureOrder::kDegree4);

/// Full-length vector holding g(x_i, t) on boundary vertices and 0 elsewhere.
Eigen::VectorXd boundary_values(const PolygonalMesh& mesh, const SpaceTimeField& g, double t);

struct ReducedSystem {
  SparseMatrix matrix;  // A restricted to free dofs
  Eigen::VectorXd rhs;  // rhs_f - A_fb g_b
};

/// Pins boundary dofs to the given values and moves the coupling to the right side.
ReducedSystem apply_dirichlet(const SparseMatrix& a, const Eigen::VectorXd& rhs_full, const GlobalSystem& system,
                              const Eigen::VectorXd& boundary_full);

/// Free-dof block of a full matrix.
SparseMatrix restrict_to_free(const SparseMatrix& a, const GlobalSystem& system);

/// Full dof vector from free values plus boundary values.
Eigen::VectorXd expand_free(const Eigen::VectorXd& free_values, const GlobalSystem& system,
                            const Eigen::VectorXd& boundary_full);

Eigen::VectorXd gather_free(const Eigen::VectorXd& full, const GlobalSystem& system);

/// Unconstrained steady solve K u = load with u = g on the boundary.
Eigen::VectorXd solve_steady(const GlobalSystem& system, const Eigen::VectorXd& load_full,
                             const Eigen::VectorXd& boundary_full);

/// Plain-text dump of every local matrix, for cross-implementation diffing.
void write_local_matrices(std::ostream& out, std::span<const ElementOperators> elements);

/// Mesh plus its element operators and assembled global forms.
class VemDiscretization {
 public:
  explicit VemDiscretization(PolygonalMesh mesh, AssemblyOptions options = {});

  const PolygonalMesh& mesh() const { return mesh_; }
  const AssemblyOptions& options() const { return options_; }
  const std::vector<ElementOperators>& elements() const { return elements_; }
  const GlobalSystem& system() const { return system_; }
  const SparseMatrix& mass() const { return system_.mass; }
  const SparseMatrix& stiffness() const { return system_.stiffness; }

  Eigen::VectorXd load(const SpaceTimeField& f, double t) const;
  Eigen::VectorXd boundary(const SpaceTimeField& g, double t) const { return boundary_values(mesh_, g, t); }

 private:
  PolygonalMesh mesh_;
  AssemblyOptions options_;
  std::vector<ElementOperators> elements_;
  GlobalSystem system_;
};

}  // namespace pvem
