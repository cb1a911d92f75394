#include "pvem/polynomial_basis.hpp"

#include <stdexcept>
#include <string>

namespace pvem {

namespace {

struct TriangleRulePoint {
  double l1, l2, l3, weight;
};

// Edge-midpoint rule, exact for degree 2.
constexpr std::array<TriangleRulePoint, 3> kDegree2Rule{{
    {0.5, 0.5, 0.0, 1.0 / 3.0},
    {0.0, 0.5, 0.5, 1.0 / 3.0},
    {0.5, 0.0, 0.5, 1.0 / 3.0},
}};

// Dunavant 6-point rule, exact for degree 4.
constexpr double kA1 = 0.44594849091596488632;
constexpr double kA2 = 0.09157621350977074346;
constexpr double kW1 = 0.22338158967801146570;
constexpr double kW2 = 0.10995174365532186764;
constexpr std::array<TriangleRulePoint, 6> kDegree4Rule{{
    {kA1, kA1, 1.0 - 2.0 * kA1, kW1},
    {kA1, 1.0 - 2.0 * kA1, kA1, kW1},
    {1.0 - 2.0 * kA1, kA1, kA1, kW1},
    {kA2, kA2, 1.0 - 2.0 * kA2, kW2},
    {kA2, 1.0 - 2.0 * kA2, kA2, kW2},
    {1.0 - 2.0 * kA2, kA2, kA2, kW2},
}};

template <std::size_t N, class Visit>
void fan_visit(std::span<const Point2> polygon, Point2 anchor, const std::array<TriangleRulePoint, N>& rule,
               Visit&& visit) {
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = polygon[i];
    const Point2 b = polygon[(i + 1) % n];
    const double area = 0.5 * cross(a - anchor, b - anchor);
    for (const auto& q : rule) visit(q.l1 * anchor + q.l2 * a + q.l3 * b, area * q.weight);
  }
}

template <class Visit>
void fan_visit(std::span<const Point2> polygon, Point2 anchor, QuadratureOrder order, Visit&& visit) {
  if (order == QuadratureOrder::kDegree4)
    fan_visit(polygon, anchor, kDegree4Rule, visit);
  else
    fan_visit(polygon, anchor, kDegree2Rule, visit);
}

}  // namespace

ScaledMonomialBasis::ScaledMonomialBasis(Point2 centroid, double h_scale) : centroid_(centroid), h_(h_scale) {
  if (!(h_scale > 0.0)) throw std::invalid_argument("monomial scale must be positive");
}

double ScaledMonomialBasis::eval(std::size_t k, Point2 p) const {
  switch (k) {
    case 0: return 1.0;
    case 1: return (p.x - centroid_.x) / h_;
    case 2: return (p.y - centroid_.y) / h_;
    default: throw std::out_of_range("monomial index " + std::to_string(k));
  }
}

Point2 ScaledMonomialBasis::gradient(std::size_t k) const {
  switch (k) {
    case 0: return {0.0, 0.0};
    case 1: return {1.0 / h_, 0.0};
    case 2: return {0.0, 1.0 / h_};
    default: throw std::out_of_range("monomial index " + std::to_string(k));
  }
}

void for_each_quadrature_point(std::span<const Point2> polygon, Point2 anchor, QuadratureOrder order,
                               const std::function<void(Point2, double)>& visit) {
  fan_visit(polygon, anchor, order, visit);
}

double integrate_over_polygon(std::span<const Point2> polygon, Point2 anchor, const std::function<double(Point2)>& f,
                              QuadratureOrder order) {
  double total = 0.0;
  fan_visit(polygon, anchor, order, [&](Point2 p, double w) { total += w * f(p); });
  return total;
}

double integrate_polynomial_over_polygon(std::span<const Point2> polygon, const ScaledMonomialBasis& basis,
                                         const QuadraticCoefficients& c) {
  auto poly = [&](Point2 p) {
    const Point2 s = basis.to_local(p);
    return c[0] + c[1] * s.x + c[2] * s.y + c[3] * s.x * s.x + c[4] * s.x * s.y + c[5] * s.y * s.y;
  };
  return integrate_over_polygon(polygon, basis.centroid(), poly, QuadratureOrder::kDegree2);
}

Eigen::Matrix3d build_H(std::span<const Point2> polygon, const ScaledMonomialBasis& basis) {
  // Products m_i m_j in (1, xi, eta, xi^2, xi eta, eta^2) coordinates.
  static constexpr std::array<std::array<std::size_t, 3>, 3> kProductSlot{{{0, 1, 2}, {1, 3, 4}, {2, 4, 5}}};
  std::array<double, 6> moments{};
  for (std::size_t s = 0; s < 6; ++s) {
    QuadraticCoefficients c{};
    c[s] = 1.0;
    moments[s] = integrate_polynomial_over_polygon(polygon, basis, c);
  }
  Eigen::Matrix3d h;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = moments[kProductSlot[i][j]];
  return h;
}

Eigen::Matrix3d build_G(const ElementGeometry& geometry) {
  const double g = geometry.area / (geometry.diameter * geometry.diameter);
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(1, 1) = g;
  m(2, 2) = g;
  return m;
}

}  // namespace pvem
