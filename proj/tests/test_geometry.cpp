#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "pvem/errors.hpp"
#include "pvem/geometry.hpp"
#include "pvem/mesh_generators.hpp"
#include "test_support.hpp"

namespace pvem {
namespace {

TEST(PolygonGeometry, UnitSquare) {
  const std::vector<Point2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto g = polygon_geometry(sq);
  EXPECT_NEAR(g.area, 1.0, 1e-15);
  EXPECT_NEAR(g.centroid.x, 0.5, 1e-15);
  EXPECT_NEAR(g.centroid.y, 0.5, 1e-15);
  EXPECT_NEAR(g.diameter, std::sqrt(2.0), 1e-15);
  EXPECT_EQ(g.n_vertices, 4u);
}

TEST(PolygonGeometry, RightTriangle) {
  const std::vector<Point2> tri{{0, 0}, {1, 0}, {0, 1}};
  const auto g = polygon_geometry(tri);
  EXPECT_NEAR(g.area, 0.5, 1e-15);
  EXPECT_NEAR(g.centroid.x, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(g.centroid.y, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(g.diameter, std::sqrt(2.0), 1e-15);
}

std::vector<Point2> random_convex_hexagon(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  std::uniform_real_distribution<double> radius(0.5, 1.5);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  const Point2 c{shift(rng), shift(rng)};
  std::vector<Point2> p;
  for (int k = 0; k < 6; ++k) {
    const double a = 2.0 * M_PI * (k + 0.5 + jitter(rng)) / 6.0;
    const double r = radius(rng);
    p.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return p;
}

// Oracle: fan triangulation from vertex 0 with per-triangle area and first moment.
TEST(PolygonGeometry, HexagonMatchesFanTriangulation) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_convex_hexagon(rng);
    double area = 0.0, mx = 0.0, my = 0.0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      const Point2 a = p[0], b = p[i], c = p[i + 1];
      const double t = 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
      area += t;
      mx += t * (a.x + b.x + c.x) / 3.0;
      my += t * (a.y + b.y + c.y) / 3.0;
    }
    const auto g = polygon_geometry(p);
    EXPECT_NEAR(g.area, area, 1e-12);
    EXPECT_NEAR(g.centroid.x, mx / area, 1e-12);
    EXPECT_NEAR(g.centroid.y, my / area, 1e-12);
  }
}

TEST(PolygonGeometry, ClockwiseOrCollapsedCellThrows) {
  const std::vector<Point2> cw{{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  EXPECT_THROW(polygon_geometry(cw, 7), DegenerateCellError);
  try {
    polygon_geometry(cw, 7);
  } catch (const DegenerateCellError& e) {
    EXPECT_EQ(e.cell_id(), 7u);
  }
  const std::vector<Point2> line{{0, 0}, {1, 0}, {2, 0}};
  EXPECT_THROW(polygon_geometry(line), DegenerateCellError);
}

TEST(PolygonPredicates, SimpleAndConvex) {
  const std::vector<Point2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const std::vector<Point2> bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  const std::vector<Point2> dart{{0, 0}, {2, 0}, {1, 0.5}, {2, 2}, {0, 2}};
  EXPECT_TRUE(is_simple_polygon(sq));
  EXPECT_TRUE(is_convex_polygon(sq));
  EXPECT_FALSE(is_simple_polygon(bowtie));
  EXPECT_TRUE(is_simple_polygon(dart));
  EXPECT_FALSE(is_convex_polygon(dart));
}

TEST(PolygonalMesh, ValidatesTopology) {
  const std::vector<Point2> v{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  EXPECT_NO_THROW(PolygonalMesh::with_derived_boundary(v, {{{0, 1, 2, 3}}}));
  // Out-of-range index.
  EXPECT_THROW(PolygonalMesh::with_derived_boundary(v, {{{0, 1, 2, 9}}}), MeshError);
  // Clockwise cell.
  EXPECT_THROW(PolygonalMesh::with_derived_boundary(v, {{{0, 3, 2, 1}}}), MeshError);
  // Does not cover the domain.
  const std::vector<Point2> w{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {0, 0}};
  EXPECT_THROW(PolygonalMesh::with_derived_boundary(w, {{{0, 1, 4}}}), MeshError);
  // Hanging vertex: edge 0-2 of the left triangle meets a split edge on the right.
  const std::vector<Point2> h{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {0, 0}};
  EXPECT_THROW(PolygonalMesh::with_derived_boundary(h, {{{0, 1, 2}}, {{0, 4, 3}}, {{4, 2, 3}}}), MeshError);
}

TEST(PolygonalMesh, BoundaryFlagsAndSize) {
  const auto mesh = testing::square_grid(4);
  std::size_t n_boundary = 0;
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) n_boundary += mesh.is_boundary_vertex(i);
  EXPECT_EQ(n_boundary, 16u);
  EXPECT_NEAR(mesh.mesh_size(), 0.5 * std::sqrt(2.0), 1e-14);
  EXPECT_THROW(compute_element_geometry(mesh, 16), std::out_of_range);
}

TEST(KernelRadius, ConvexAndNonconvex) {
  const std::vector<Point2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  EXPECT_NEAR(kernel_inscribed_radius(sq), 0.5, 1e-12);
  // 3-4-5 triangle: inradius (a + b - c) / 2 = 1.
  const std::vector<Point2> tri{{0, 0}, {3, 0}, {0, 4}};
  EXPECT_NEAR(kernel_inscribed_radius(tri), 1.0, 1e-12);
  // L-shape: the kernel is the unit corner square [0,1]^2, inradius 0.5.
  const std::vector<Point2> ell{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  EXPECT_NEAR(kernel_inscribed_radius(ell), 0.5, 1e-12);
}

TEST(Regularity, SquareGrid) {
  const auto r = check_regularity(testing::square_grid(5));
  EXPECT_NEAR(r.min_edge_to_diameter_ratio, 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.star_shaped_estimate, 0.5 / std::sqrt(2.0), 1e-12);
}

TEST(Regularity, GeneratedMeshesInUnitInterval) {
  for (const auto& mesh : {generate_distorted_quad_mesh(8, 0.3, 1), generate_nonconvex_mesh(6),
                           generate_voronoi_mesh(64, 20, 3)}) {
    const auto r = check_regularity(mesh);
    EXPECT_GT(r.min_edge_to_diameter_ratio, 0.0);
    EXPECT_LE(r.min_edge_to_diameter_ratio, 1.0);
    EXPECT_GT(r.star_shaped_estimate, 0.0);
    EXPECT_LE(r.star_shaped_estimate, 1.0);
    EXPECT_LT(r.worst_cell_id, mesh.num_cells());
    EXPECT_LT(r.worst_star_cell_id, mesh.num_cells());
  }
}

}  // namespace
}  // namespace pvem
