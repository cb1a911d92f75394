#pragma once

#include <cstdint>
#include <vector>

#include "pvem/geometry.hpp"

namespace pvem {

/// n x n grid of quadrilaterals with every interior vertex moved by a seeded
/// offset drawn uniformly from the disk of radius distortion * w / 4, w the
/// grid spacing. Boundary vertices stay on the grid. Candidate meshes with
/// inverted or non-simple cells are redrawn (bounded number of attempts).
PolygonalMesh generate_distorted_quad_mesh(int n_per_side, double distortion, std::uint64_t seed,
                                           Domain domain = {});

/// Deterministic chevron tiling. Each cell of an n x n grid carries two extra
/// vertices at the midpoints of its horizontal edges; interior midpoints are
/// lifted by w/4 in even columns and lowered by w/4 in odd columns. Every cell
/// whose lower midpoint is lifted (or upper midpoint lowered) has a reflex
/// vertex, so all cells are nonconvex hexagons except the convex ones on the
/// top/bottom rows.
PolygonalMesh generate_nonconvex_mesh(int n_per_side, Domain domain = {});

/// Clipped Voronoi tessellation of n_seeds uniformly drawn seeds, relaxed with
/// lloyd_iterations Lloyd steps (each seed moved to the centroid of its cell).
PolygonalMesh generate_voronoi_mesh(int n_seeds, int lloyd_iterations, std::uint64_t seed,
                                    Domain domain = {});

/// Voronoi mesh for an explicit seed set (no Lloyd relaxation).
PolygonalMesh voronoi_mesh_from_seeds(std::vector<Point2> seeds, Domain domain = {});

/// Seeds after `iterations` Lloyd steps.
std::vector<Point2> lloyd_relax(std::vector<Point2> seeds, int iterations, const Domain& domain);

/// Seeded uniform random points in the domain.
std::vector<Point2> random_seeds(int n_seeds, std::uint64_t seed, const Domain& domain);

/// Cells of the clipped Voronoi diagram, one counterclockwise polygon per seed.
std::vector<std::vector<Point2>> clipped_voronoi_cells(const std::vector<Point2>& seeds, const Domain& domain);

}  // namespace pvem
