#include "pvem/mesh_generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "pvem/errors.hpp"

namespace pvem {

namespace {

constexpr int kMaxDistortionAttempts = 100;
constexpr int kMaxSeedRetries = 10;

void require_resolution(int n_per_side) {
  if (n_per_side < 2) throw ConfigError("n_per_side must be at least 2, got " + std::to_string(n_per_side));
}

bool cells_valid(const std::vector<Point2>& vertices, const std::vector<PolygonalCell>& cells) {
  std::vector<Point2> poly;
  for (const auto& cell : cells) {
    poly.clear();
    for (auto id : cell.vertex_ids) poly.push_back(vertices[id]);
    if (signed_area(poly) <= 0.0 || !is_simple_polygon(poly)) return false;
  }
  return true;
}

/// Keeps the part of a convex polygon closer to `site` than to `other`.
std::vector<Point2> clip_by_bisector(const std::vector<Point2>& poly, Point2 site, Point2 other) {
  const Point2 dir = other - site;
  const Point2 mid = 0.5 * (site + other);
  auto side = [&](Point2 p) { return dot(p - mid, dir); };

  std::vector<Point2> out;
  out.reserve(poly.size() + 1);
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = poly[i];
    const Point2 b = poly[(i + 1) % n];
    const double sa = side(a);
    const double sb = side(b);
    if (sa <= 0.0) out.push_back(a);
    if ((sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0)) {
      const double t = sa / (sa - sb);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

class VertexPool {
 public:
  VertexPool(double tol, const Domain& domain) : tol_(tol), domain_(domain) {}

  std::size_t insert(Point2 p) {
    if (std::abs(p.x - domain_.lower.x) <= tol_) p.x = domain_.lower.x;
    if (std::abs(p.x - domain_.upper.x) <= tol_) p.x = domain_.upper.x;
    if (std::abs(p.y - domain_.lower.y) <= tol_) p.y = domain_.lower.y;
    if (std::abs(p.y - domain_.upper.y) <= tol_) p.y = domain_.upper.y;
    const auto kx = static_cast<long long>(std::floor(p.x / tol_));
    const auto ky = static_cast<long long>(std::floor(p.y / tol_));
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = buckets_.find({kx + dx, ky + dy});
        if (it == buckets_.end()) continue;
        for (auto id : it->second)
          if (distance(points_[id], p) <= tol_) return id;
      }
    points_.push_back(p);
    buckets_[{kx, ky}].push_back(points_.size() - 1);
    return points_.size() - 1;
  }

  std::vector<Point2> take() { return std::move(points_); }

 private:
  double tol_;
  Domain domain_;
  std::vector<Point2> points_;
  std::map<std::pair<long long, long long>, std::vector<std::size_t>> buckets_;
};

bool has_duplicate_seeds(std::vector<Point2> seeds, double tol) {
  std::sort(seeds.begin(), seeds.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  for (std::size_t i = 0; i < seeds.size(); ++i)
    for (std::size_t j = i + 1; j < seeds.size() && seeds[j].x - seeds[i].x <= tol; ++j)
      if (distance(seeds[i], seeds[j]) <= tol) return true;
  return false;
}

}  // namespace

PolygonalMesh generate_distorted_quad_mesh(int n_per_side, double distortion, std::uint64_t seed,
                                           Domain domain) {
  require_resolution(n_per_side);
  if (!(distortion >= 0.0 && distortion < 0.5))
    throw ConfigError("distortion must lie in [0, 0.5), got " + std::to_string(distortion));

  const auto n = static_cast<std::size_t>(n_per_side);
  const double wx = domain.width() / n_per_side;
  const double wy = domain.height() / n_per_side;
  auto index = [n](std::size_t i, std::size_t j) { return i + j * (n + 1); };

  std::vector<Point2> grid((n + 1) * (n + 1));
  for (std::size_t j = 0; j <= n; ++j)
    for (std::size_t i = 0; i <= n; ++i) {
      // Last row/column pinned exactly to the upper corner.
      const double x = i == n ? domain.upper.x : domain.lower.x + static_cast<double>(i) * wx;
      const double y = j == n ? domain.upper.y : domain.lower.y + static_cast<double>(j) * wy;
      grid[index(i, j)] = {x, y};
    }

  std::vector<PolygonalCell> cells;
  cells.reserve(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      cells.push_back({{index(i, j), index(i + 1, j), index(i + 1, j + 1), index(i, j + 1)}});

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double radius = 0.25 * distortion * std::min(wx, wy);
  for (int attempt = 0; attempt < kMaxDistortionAttempts; ++attempt) {
    std::vector<Point2> vertices = grid;
    if (radius > 0.0) {
      for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = 1; i < n; ++i) {
          const double r = radius * std::sqrt(unit(rng));
          const double theta = 2.0 * std::numbers::pi * unit(rng);
          vertices[index(i, j)] = vertices[index(i, j)] + Point2{r * std::cos(theta), r * std::sin(theta)};
        }
    }
    if (cells_valid(vertices, cells)) return PolygonalMesh::with_derived_boundary(std::move(vertices), cells, domain);
  }
  throw MeshError("distorted mesh: no valid perturbation after " + std::to_string(kMaxDistortionAttempts) +
                  " attempts");
}

PolygonalMesh generate_nonconvex_mesh(int n_per_side, Domain domain) {
  require_resolution(n_per_side);
  const auto n = static_cast<std::size_t>(n_per_side);
  const double wx = domain.width() / n_per_side;
  const double wy = domain.height() / n_per_side;
  const double lift = 0.25 * wy;

  auto corner = [n](std::size_t i, std::size_t j) { return i + j * (n + 1); };
  const std::size_t n_corners = (n + 1) * (n + 1);
  auto midpoint = [n, n_corners](std::size_t i, std::size_t j) { return n_corners + i + j * n; };

  std::vector<Point2> vertices(n_corners + n * (n + 1));
  auto grid_x = [&](std::size_t i) { return i == n ? domain.upper.x : domain.lower.x + static_cast<double>(i) * wx; };
  auto grid_y = [&](std::size_t j) { return j == n ? domain.upper.y : domain.lower.y + static_cast<double>(j) * wy; };
  for (std::size_t j = 0; j <= n; ++j)
    for (std::size_t i = 0; i <= n; ++i) vertices[corner(i, j)] = {grid_x(i), grid_y(j)};
  for (std::size_t j = 0; j <= n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      double y = grid_y(j);
      if (j != 0 && j != n) y += (i % 2 == 0) ? lift : -lift;
      vertices[midpoint(i, j)] = {domain.lower.x + (static_cast<double>(i) + 0.5) * wx, y};
    }

  std::vector<PolygonalCell> cells;
  cells.reserve(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      cells.push_back({{corner(i, j), midpoint(i, j), corner(i + 1, j), corner(i + 1, j + 1), midpoint(i, j + 1),
                        corner(i, j + 1)}});
  return PolygonalMesh::with_derived_boundary(std::move(vertices), std::move(cells), domain);
}

std::vector<std::vector<Point2>> clipped_voronoi_cells(const std::vector<Point2>& seeds, const Domain& domain) {
  const std::size_t n = seeds.size();
  const auto nb = static_cast<long long>(std::max(1.0, std::floor(std::sqrt(static_cast<double>(n)))));
  const double bx = domain.width() / static_cast<double>(nb);
  const double by = domain.height() / static_cast<double>(nb);
  auto bucket_of = [&](Point2 p) {
    auto clampi = [nb](long long v) { return std::clamp(v, 0LL, nb - 1); };
    return std::make_pair(clampi(static_cast<long long>(std::floor((p.x - domain.lower.x) / bx))),
                          clampi(static_cast<long long>(std::floor((p.y - domain.lower.y) / by))));
  };
  std::vector<std::vector<std::size_t>> buckets(static_cast<std::size_t>(nb * nb));
  for (std::size_t s = 0; s < n; ++s) {
    const auto [ix, iy] = bucket_of(seeds[s]);
    buckets[static_cast<std::size_t>(ix + iy * nb)].push_back(s);
  }

  const std::vector<Point2> box{domain.lower, {domain.upper.x, domain.lower.y}, domain.upper,
                                {domain.lower.x, domain.upper.y}};
  const double b = std::min(bx, by);
  std::vector<std::vector<Point2>> cells(n);
  for (std::size_t s = 0; s < n; ++s) {
    const Point2 site = seeds[s];
    std::vector<Point2> poly = box;
    const auto [cx, cy] = bucket_of(site);
    for (long long ring = 0; ring <= nb; ++ring) {
      for (long long ix = cx - ring; ix <= cx + ring; ++ix)
        for (long long iy = cy - ring; iy <= cy + ring; ++iy) {
          if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != ring) continue;
          if (ix < 0 || iy < 0 || ix >= nb || iy >= nb) continue;
          for (auto other : buckets[static_cast<std::size_t>(ix + iy * nb)])
            if (other != s) poly = clip_by_bisector(poly, site, seeds[other]);
        }
      double reach = 0.0;
      for (const auto& p : poly) reach = std::max(reach, distance(p, site));
      // Seeds beyond ring+1 are at least ring*b away; they cannot cut a cell of radius reach.
      if (static_cast<double>(ring) * b > 2.0 * reach) break;
    }
    cells[s] = std::move(poly);
  }
  return cells;
}

std::vector<Point2> random_seeds(int n_seeds, std::uint64_t seed, const Domain& domain) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(domain.lower.x, domain.upper.x);
  std::uniform_real_distribution<double> uy(domain.lower.y, domain.upper.y);
  std::vector<Point2> seeds(static_cast<std::size_t>(n_seeds));
  for (auto& p : seeds) {
    p.x = ux(rng);
    p.y = uy(rng);
  }
  return seeds;
}

std::vector<Point2> lloyd_relax(std::vector<Point2> seeds, int iterations, const Domain& domain) {
  for (int it = 0; it < iterations; ++it) {
    const auto cells = clipped_voronoi_cells(seeds, domain);
    for (std::size_t s = 0; s < seeds.size(); ++s) seeds[s] = polygon_geometry(cells[s], s).centroid;
  }
  return seeds;
}

PolygonalMesh voronoi_mesh_from_seeds(std::vector<Point2> seeds, Domain domain) {
  if (seeds.size() < 4) throw ConfigError("Voronoi mesh needs at least 4 seeds");
  const double scale = std::max(domain.width(), domain.height());
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  const double spacing = scale / std::sqrt(static_cast<double>(seeds.size()));
  for (int retry = 0; has_duplicate_seeds(seeds, 1e-10 * scale); ++retry) {
    if (retry == kMaxSeedRetries) throw MeshError("could not separate coincident Voronoi seeds");
    for (auto& p : seeds) {
      p.x = std::clamp(p.x + 1e-6 * spacing * jitter(rng), domain.lower.x, domain.upper.x);
      p.y = std::clamp(p.y + 1e-6 * spacing * jitter(rng), domain.lower.y, domain.upper.y);
    }
  }

  const auto polys = clipped_voronoi_cells(seeds, domain);
  VertexPool pool(1e-9 * scale, domain);
  std::vector<PolygonalCell> cells;
  cells.reserve(polys.size());
  for (std::size_t s = 0; s < polys.size(); ++s) {
    PolygonalCell cell;
    for (const auto& p : polys[s]) {
      const auto id = pool.insert(p);
      if (cell.vertex_ids.empty() || cell.vertex_ids.back() != id) cell.vertex_ids.push_back(id);
    }
    while (cell.vertex_ids.size() > 1 && cell.vertex_ids.front() == cell.vertex_ids.back()) cell.vertex_ids.pop_back();
    if (cell.vertex_ids.size() < 3) throw DegenerateCellError(s, "Voronoi cell collapsed");
    cells.push_back(std::move(cell));
  }
  return PolygonalMesh::with_derived_boundary(pool.take(), std::move(cells), domain);
}

PolygonalMesh generate_voronoi_mesh(int n_seeds, int lloyd_iterations, std::uint64_t seed, Domain domain) {
  if (n_seeds < 4) throw ConfigError("n_seeds must be at least 4, got " + std::to_string(n_seeds));
  if (lloyd_iterations < 0) throw ConfigError("lloyd_iterations must be non-negative");
  auto seeds = lloyd_relax(random_seeds(n_seeds, seed, domain), lloyd_iterations, domain);
  return voronoi_mesh_from_seeds(std::move(seeds), domain);
}

}  // namespace pvem
