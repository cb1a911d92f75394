#pragma once

#include <span>

#include <Eigen/Core>

#include "pvem/geometry.hpp"
#include "pvem/polynomial_basis.hpp"

namespace pvem {

/// N x 3, row i = (m_0, m_1, m_2) evaluated at vertex i.
using DofMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3>;
/// 3 x N, maps vertex values to monomial coefficients.
using ProjectorMatrix = Eigen::Matrix<double, 3, Eigen::Dynamic>;

DofMatrix build_D(std::span<const Point2> polygon, const ScaledMonomialBasis& basis);

/// Least-squares projector onto linear polynomials in the vertex-value inner
/// product: (D^T D)^{-1} D^T. Throws SingularElementError when D is rank deficient.
ProjectorMatrix build_oblique_projector(const DofMatrix& d);

/// Same projector assembled from the weighted normal equations
/// (|P| D^T D) zeta = |P| D^T v. Identical up to rounding; kept for tests.
ProjectorMatrix build_oblique_projector_weighted(const DofMatrix& d, double area);

/// 3 x N matrix B of the elliptic projector's right-hand side:
///   row 0: (1/|dP|) integral over dP of phi_i,
///   rows 1, 2: integral over dP of phi_i dm_k/dn,
/// exact by the trapezoid rule since traces are piecewise linear.
ProjectorMatrix boundary_moment_matrix(std::span<const Point2> polygon, const ScaledMonomialBasis& basis);

/// H1-seminorm projector onto linear polynomials, constant mode fixed by the
/// boundary mean. Throws SingularElementError for a degenerate element.
ProjectorMatrix build_elliptic_projector(std::span<const Point2> polygon, const ScaledMonomialBasis& basis,
                                         const DofMatrix& d, const Eigen::Matrix3d& g);

/// 2-norm condition number of D^T D.
double normal_matrix_condition(const DofMatrix& d);

}  // namespace pvem
