#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace pvem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Axis-aligned rectangular domain.
struct Domain {
  Point2 lower{-1.0, -1.0};
  Point2 upper{1.0, 1.0};

  double width() const { return upper.x - lower.x; }
  double height() const { return upper.y - lower.y; }
  double area() const { return width() * height(); }
  bool on_boundary(Point2 p, double tol) const;
};

/// Vertex indices in counterclockwise order.
struct PolygonalCell {
  std::vector<std::size_t> vertex_ids;

  std::size_t size() const { return vertex_ids.size(); }
  friend bool operator==(const PolygonalCell&, const PolygonalCell&) = default;
};

struct ElementGeometry {
  Point2 centroid;
  double diameter = 0.0;
  double area = 0.0;
  std::size_t n_vertices = 0;
};

/// Signed area of a closed polygon (positive when counterclockwise).
double signed_area(std::span<const Point2> polygon);

/// Centroid, area and diameter of a closed counterclockwise polygon.
/// Throws DegenerateCellError (with cell_id) when the signed area is not positive.
ElementGeometry polygon_geometry(std::span<const Point2> polygon, std::size_t cell_id = 0);

/// True when no two non-adjacent edges of the polygon intersect.
bool is_simple_polygon(std::span<const Point2> polygon);

bool is_convex_polygon(std::span<const Point2> polygon);

/// Polygonal discretization of a rectangular domain. Immutable once built; the
/// constructor validates the topology (index ranges, simple positive cells,
/// conforming interior edges, area cover) and throws MeshError on violation.
class PolygonalMesh {
 public:
  PolygonalMesh(std::vector<Point2> vertices, std::vector<PolygonalCell> cells,
                std::vector<bool> boundary_vertex_flags, Domain domain = {});

  /// Boundary flags are derived from the domain rectangle.
  static PolygonalMesh with_derived_boundary(std::vector<Point2> vertices,
                                             std::vector<PolygonalCell> cells, Domain domain = {});

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<PolygonalCell>& cells() const { return cells_; }
  const std::vector<bool>& boundary_vertex_flags() const { return boundary_; }
  const Point2& vertex(std::size_t i) const { return vertices_[i]; }
  const PolygonalCell& cell(std::size_t c) const { return cells_[c]; }
  bool is_boundary_vertex(std::size_t i) const { return boundary_[i]; }
  const Domain& domain() const { return domain_; }

  /// Coordinates of the cell's vertices in order.
  std::vector<Point2> cell_polygon(std::size_t cell_id) const;

  /// Largest element diameter.
  double mesh_size() const { return mesh_size_; }

  friend bool operator==(const PolygonalMesh& a, const PolygonalMesh& b) {
    return a.vertices_ == b.vertices_ && a.cells_ == b.cells_ && a.boundary_ == b.boundary_;
  }

 private:
  void validate();

  std::vector<Point2> vertices_;
  std::vector<PolygonalCell> cells_;
  std::vector<bool> boundary_;
  Domain domain_;
  double mesh_size_ = 0.0;
};

/// Throws std::out_of_range for an invalid cell_id and DegenerateCellError for
/// a zero-area cell.
ElementGeometry compute_element_geometry(const PolygonalMesh& mesh, std::size_t cell_id);

struct RegularityReport {
  /// min over cells and edges of h_E / h_P.
  double min_edge_to_diameter_ratio = 1.0;
  /// min over cells of rho_P / h_P, rho_P the radius of the largest disk
  /// contained in the kernel of P. A conservative estimate of the star-shapedness
  /// constant: P is star-shaped with respect to every disk inside its kernel.
  double star_shaped_estimate = 1.0;
  /// Cell attaining the minimum edge ratio.
  std::size_t worst_cell_id = 0;
  /// Cell attaining the minimum star-shapedness estimate.
  std::size_t worst_star_cell_id = 0;
  double mesh_size = 0.0;
};

/// Radius of the largest disk contained in the kernel (visibility region) of a
/// simple polygon. Returns 0 when the kernel is empty.
double kernel_inscribed_radius(std::span<const Point2> polygon);

RegularityReport check_regularity(const PolygonalMesh& mesh);

}  // namespace pvem
