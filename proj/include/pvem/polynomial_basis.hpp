#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Core>

#include "pvem/geometry.hpp"

namespace pvem {

/// Scaled monomials of degree <= 1 on an element:
///   m_0 = 1, m_1 = (x - x_P) / h_P, m_2 = (y - y_P) / h_P.
/// Indices are 0-based throughout the library.
class ScaledMonomialBasis {
 public:
  static constexpr std::size_t kSize = 3;

  ScaledMonomialBasis(Point2 centroid, double h_scale);
  explicit ScaledMonomialBasis(const ElementGeometry& geometry)
      : ScaledMonomialBasis(geometry.centroid, geometry.diameter) {}

  Point2 centroid() const { return centroid_; }
  double h_scale() const { return h_; }

  /// Throws std::out_of_range for k > 2.
  double eval(std::size_t k, Point2 p) const;
  /// Constant over the element.
  Point2 gradient(std::size_t k) const;

  /// Local scaled coordinates (xi, eta) of a point.
  Point2 to_local(Point2 p) const { return {(p.x - centroid_.x) / h_, (p.y - centroid_.y) / h_}; }

 private:
  Point2 centroid_;
  double h_;
};

/// Coefficients of a polynomial of total degree <= 2 in the scaled variables,
/// ordered (1, xi, eta, xi^2, xi*eta, eta^2).
using QuadraticCoefficients = std::array<double, 6>;

enum class QuadratureOrder { kDegree2 = 2, kDegree4 = 4 };

/// Visits every fan-quadrature point of the polygon with its signed weight.
void for_each_quadrature_point(std::span<const Point2> polygon, Point2 anchor, QuadratureOrder order,
                               const std::function<void(Point2, double)>& visit);

/// Integrates f over a polygon by fanning signed triangles (c, v_i, v_{i+1})
/// from the anchor c and applying a triangle rule on each. The signed
/// decomposition is exact for any anchor, so nonconvex cells need no special care.
double integrate_over_polygon(std::span<const Point2> polygon, Point2 anchor,
                              const std::function<double(Point2)>& f,
                              QuadratureOrder order = QuadratureOrder::kDegree2);

/// Exact integral of a quadratic in scaled monomials (degree-2 rule on the centroid fan).
double integrate_polynomial_over_polygon(std::span<const Point2> polygon, const ScaledMonomialBasis& basis,
                                         const QuadraticCoefficients& coefficients);

/// H_ij = integral over P of m_i m_j.
Eigen::Matrix3d build_H(std::span<const Point2> polygon, const ScaledMonomialBasis& basis);

/// G_ij = integral over P of grad m_i . grad m_j = diag(0, |P|/h^2, |P|/h^2).
Eigen::Matrix3d build_G(const ElementGeometry& geometry);

}  // namespace pvem
