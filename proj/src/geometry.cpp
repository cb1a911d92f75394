#include "pvem/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "pvem/errors.hpp"

namespace pvem {

namespace {

int orientation(Point2 a, Point2 b, Point2 c) {
  const double v = cross(b - a, c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

}  // namespace

bool Domain::on_boundary(Point2 p, double tol) const {
  return std::abs(p.x - lower.x) <= tol || std::abs(p.x - upper.x) <= tol ||
         std::abs(p.y - lower.y) <= tol || std::abs(p.y - upper.y) <= tol;
}

double signed_area(std::span<const Point2> polygon) {
  const std::size_t n = polygon.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) twice += cross(polygon[i], polygon[(i + 1) % n]);
  return 0.5 * twice;
}

ElementGeometry polygon_geometry(std::span<const Point2> polygon, std::size_t cell_id) {
  const std::size_t n = polygon.size();
  if (n < 3) throw DegenerateCellError(cell_id, "fewer than 3 vertices");

  // Shift to the first vertex to limit cancellation in the moment sums.
  const Point2 origin = polygon[0];
  double twice_area = 0.0;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = polygon[i] - origin;
    const Point2 b = polygon[(i + 1) % n] - origin;
    const double c = cross(a, b);
    twice_area += c;
    mx += (a.x + b.x) * c;
    my += (a.y + b.y) * c;
  }
  const double area = 0.5 * twice_area;
  double diameter = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) diameter = std::max(diameter, distance(polygon[i], polygon[j]));

  if (!(area > std::numeric_limits<double>::epsilon() * diameter * diameter))
    throw DegenerateCellError(cell_id, "non-positive area " + std::to_string(area));

  ElementGeometry g;
  g.area = area;
  g.centroid = origin + Point2{mx / (6.0 * area), my / (6.0 * area)};
  g.diameter = diameter;
  g.n_vertices = n;
  return g;
}

bool is_simple_polygon(std::span<const Point2> polygon) {
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (polygon[i] == polygon[(i + 1) % n]) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      // Adjacent edges share an endpoint by construction.
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(polygon[i], polygon[(i + 1) % n], polygon[j], polygon[(j + 1) % n]))
        return false;
    }
  }
  return true;
}

bool is_convex_polygon(std::span<const Point2> polygon) {
  const std::size_t n = polygon.size();
  const double scale = [&] {
    double s = 0.0;
    for (const auto& p : polygon) s = std::max({s, std::abs(p.x), std::abs(p.y)});
    return std::max(s, 1.0);
  }();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = polygon[(i + n - 1) % n];
    const Point2 b = polygon[i];
    const Point2 c = polygon[(i + 1) % n];
    if (cross(b - a, c - b) < -1e-14 * scale * scale) return false;
  }
  return true;
}

PolygonalMesh::PolygonalMesh(std::vector<Point2> vertices, std::vector<PolygonalCell> cells,
                             std::vector<bool> boundary_vertex_flags, Domain domain)
    : vertices_(std::move(vertices)),
      cells_(std::move(cells)),
      boundary_(std::move(boundary_vertex_flags)),
      domain_(domain) {
  validate();
}

PolygonalMesh PolygonalMesh::with_derived_boundary(std::vector<Point2> vertices,
                                                   std::vector<PolygonalCell> cells, Domain domain) {
  const double tol = 1e-12 * std::max(domain.width(), domain.height());
  std::vector<bool> flags(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) flags[i] = domain.on_boundary(vertices[i], tol);
  return PolygonalMesh(std::move(vertices), std::move(cells), std::move(flags), domain);
}

std::vector<Point2> PolygonalMesh::cell_polygon(std::size_t cell_id) const {
  const auto& ids = cells_.at(cell_id).vertex_ids;
  std::vector<Point2> poly;
  poly.reserve(ids.size());
  for (auto id : ids) poly.push_back(vertices_[id]);
  return poly;
}

void PolygonalMesh::validate() {
  if (vertices_.empty() || cells_.empty()) throw MeshError("mesh has no vertices or no cells");
  if (boundary_.size() != vertices_.size())
    throw MeshError("boundary flag count does not match vertex count");
  for (const auto& p : vertices_)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw MeshError("non-finite vertex coordinate");

  const std::size_t nv = vertices_.size();
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  double total_area = 0.0;
  mesh_size_ = 0.0;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& ids = cells_[c].vertex_ids;
    if (ids.size() < 3) throw DegenerateCellError(c, "fewer than 3 vertices");
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (ids[k] >= nv)
        throw MeshError("cell " + std::to_string(c) + " references vertex " + std::to_string(ids[k]) +
                        " out of range");
      if (ids[k] == ids[(k + 1) % ids.size()])
        throw DegenerateCellError(c, "repeated consecutive vertex");
      edges.emplace_back(ids[k], ids[(k + 1) % ids.size()]);
    }
    const auto poly = cell_polygon(c);
    const auto g = polygon_geometry(poly, c);
    if (!is_simple_polygon(poly)) throw DegenerateCellError(c, "self-intersecting polygon");
    total_area += g.area;
    mesh_size_ = std::max(mesh_size_, g.diameter);
  }

  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw MeshError("directed edge used by more than one cell");
  const double tol = 1e-10 * std::max(domain_.width(), domain_.height());
  for (const auto& [a, b] : edges) {
    if (std::binary_search(edges.begin(), edges.end(), std::make_pair(b, a))) continue;
    const Point2 pa = vertices_[a];
    const Point2 pb = vertices_[b];
    const bool on_side = (std::abs(pa.x - domain_.lower.x) <= tol && std::abs(pb.x - domain_.lower.x) <= tol) ||
                         (std::abs(pa.x - domain_.upper.x) <= tol && std::abs(pb.x - domain_.upper.x) <= tol) ||
                         (std::abs(pa.y - domain_.lower.y) <= tol && std::abs(pb.y - domain_.lower.y) <= tol) ||
                         (std::abs(pa.y - domain_.upper.y) <= tol && std::abs(pb.y - domain_.upper.y) <= tol);
    if (!on_side)
      throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                      ") has no opposite twin and is not on the domain boundary");
    if (!boundary_[a] || !boundary_[b])
      throw MeshError("boundary edge (" + std::to_string(a) + "," + std::to_string(b) +
                      ") has an endpoint not flagged as boundary");
  }

  if (std::abs(total_area - domain_.area()) > 1e-10 * domain_.area())
    throw MeshError("cell areas sum to " + std::to_string(total_area) + ", domain area is " +
                    std::to_string(domain_.area()));
}

ElementGeometry compute_element_geometry(const PolygonalMesh& mesh, std::size_t cell_id) {
  if (cell_id >= mesh.num_cells()) throw std::out_of_range("cell id " + std::to_string(cell_id));
  return polygon_geometry(mesh.cell_polygon(cell_id), cell_id);
}

double kernel_inscribed_radius(std::span<const Point2> polygon) {
  // max r s.t. n_e . (c - p_e) >= r for every edge e (inward unit normals n_e).
  // Three unknowns (c_x, c_y, r): the optimum sits on a vertex of the feasible
  // polyhedron, so enumerating all triples of active constraints is exact.
  const std::size_t n = polygon.size();
  std::vector<Eigen::Vector3d> rows(n);
  std::vector<double> rhs(n);
  double scale = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    const Point2 a = polygon[e];
    const Point2 d = polygon[(e + 1) % n] - a;
    const double len = norm(d);
    scale = std::max(scale, len);
    const Point2 inward{-d.y / len, d.x / len};
    rows[e] = {inward.x, inward.y, -1.0};
    rhs[e] = dot(inward, a);
  }
  const double feas_tol = 1e-12 * scale;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Eigen::Matrix3d a;
        a.row(0) = rows[i];
        a.row(1) = rows[j];
        a.row(2) = rows[k];
        if (std::abs(a.determinant()) < 1e-12) continue;
        const Eigen::Vector3d sol = a.partialPivLu().solve(Eigen::Vector3d(rhs[i], rhs[j], rhs[k]));
        if (sol[2] <= best) continue;
        bool feasible = true;
        for (std::size_t e = 0; e < n && feasible; ++e)
          feasible = rows[e].dot(sol) >= rhs[e] - feas_tol;
        if (feasible) best = sol[2];
      }
  return std::max(best, 0.0);
}

RegularityReport check_regularity(const PolygonalMesh& mesh) {
  RegularityReport report;
  report.mesh_size = mesh.mesh_size();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto poly = mesh.cell_polygon(c);
    const auto g = polygon_geometry(poly, c);
    for (std::size_t e = 0; e < poly.size(); ++e) {
      const double ratio = distance(poly[e], poly[(e + 1) % poly.size()]) / g.diameter;
      if (ratio < report.min_edge_to_diameter_ratio) {
        report.min_edge_to_diameter_ratio = ratio;
        report.worst_cell_id = c;
      }
    }
    const double star = kernel_inscribed_radius(poly) / g.diameter;
    if (star < report.star_shaped_estimate) {
      report.star_shaped_estimate = star;
      report.worst_star_cell_id = c;
    }
  }
  return report;
}

}  // namespace pvem
