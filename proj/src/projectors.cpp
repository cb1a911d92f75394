#include "pvem/projectors.hpp"

#include <Eigen/Dense>

#include "pvem/errors.hpp"

namespace pvem {

namespace {

// 3x3 solve with partial pivoting; rejects numerically singular systems.
ProjectorMatrix solve_3x3(const Eigen::Matrix3d& a, const ProjectorMatrix& rhs, const char* what) {
  const Eigen::PartialPivLU<Eigen::Matrix3d> lu(a);
  const double scale = a.cwiseAbs().maxCoeff();
  const auto& u = lu.matrixLU();
  const double min_pivot = u.diagonal().cwiseAbs().minCoeff();
  if (!(scale > 0.0) || min_pivot <= 1e-13 * scale) throw SingularElementError(what);
  return lu.solve(rhs);
}

}  // namespace

DofMatrix build_D(std::span<const Point2> polygon, const ScaledMonomialBasis& basis) {
  DofMatrix d(static_cast<Eigen::Index>(polygon.size()), 3);
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    for (std::size_t k = 0; k < 3; ++k) d(row, static_cast<Eigen::Index>(k)) = basis.eval(k, polygon[i]);
  }
  return d;
}

ProjectorMatrix build_oblique_projector(const DofMatrix& d) {
  const Eigen::Matrix3d normal = d.transpose() * d;
  return solve_3x3(normal, d.transpose(), "rank-deficient vertex matrix (collinear vertices)");
}

ProjectorMatrix build_oblique_projector_weighted(const DofMatrix& d, double area) {
  const Eigen::Matrix3d normal = area * (d.transpose() * d);
  const ProjectorMatrix rhs = area * d.transpose();
  return solve_3x3(normal, rhs, "rank-deficient vertex matrix (collinear vertices)");
}

ProjectorMatrix boundary_moment_matrix(std::span<const Point2> polygon, const ScaledMonomialBasis& basis) {
  const std::size_t n = polygon.size();
  ProjectorMatrix b = ProjectorMatrix::Zero(3, static_cast<Eigen::Index>(n));
  double perimeter = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    const std::size_t i = e;
    const std::size_t j = (e + 1) % n;
    const Point2 t = polygon[j] - polygon[i];
    const double len = norm(t);
    perimeter += len;
    // Outward normal times length for a counterclockwise polygon.
    const Point2 nl{t.y, -t.x};
    const auto ci = static_cast<Eigen::Index>(i);
    const auto cj = static_cast<Eigen::Index>(j);
    b(0, ci) += 0.5 * len;
    b(0, cj) += 0.5 * len;
    for (std::size_t k = 1; k < 3; ++k) {
      const double dmdn = dot(basis.gradient(k), nl);  // (dm_k/dn) * |e|
      b(static_cast<Eigen::Index>(k), ci) += 0.5 * dmdn;
      b(static_cast<Eigen::Index>(k), cj) += 0.5 * dmdn;
    }
  }
  b.row(0) /= perimeter;
  return b;
}

ProjectorMatrix build_elliptic_projector(std::span<const Point2> polygon, const ScaledMonomialBasis& basis,
                                         const DofMatrix& d, const Eigen::Matrix3d& g) {
  const ProjectorMatrix b = boundary_moment_matrix(polygon, basis);
  Eigen::Matrix3d lhs = g;
  lhs.row(0) = b.row(0) * d;
  return solve_3x3(lhs, b, "singular elliptic projector system");
}

double normal_matrix_condition(const DofMatrix& d) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(d.transpose() * d);
  const auto ev = eig.eigenvalues();
  return ev.maxCoeff() / ev.minCoeff();
}

}  // namespace pvem
