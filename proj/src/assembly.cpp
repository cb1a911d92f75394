#include "pvem/assembly.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace pvem {

Eigen::MatrixXd local_mass(const Eigen::Matrix3d& h, const DofMatrix& d, const ProjectorMatrix& oblique,
                           double area) {
  const auto n = d.rows();
  const Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(n, n) - d * oblique;
  Eigen::MatrixXd m = oblique.transpose() * h * oblique + area * residual.transpose() * residual;
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd local_stiffness(const Eigen::Matrix3d& g, const DofMatrix& d, const ProjectorMatrix& elliptic) {
  const auto n = d.rows();
  const Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(n, n) - d * elliptic;
  Eigen::MatrixXd k = elliptic.transpose() * g * elliptic + residual.transpose() * residual;
  return 0.5 * (k + k.transpose());
}

Eigen::Vector3d load_moments(std::span<const Point2> polygon, const ScaledMonomialBasis& basis, const ScalarField& f,
                             QuadratureOrder order) {
  // One evaluation of f per quadrature point for all three moments.
  Eigen::Vector3d moments = Eigen::Vector3d::Zero();
  for_each_quadrature_point(polygon, basis.centroid(), order, [&](Point2 p, double w) {
    const double wf = w * f(p);
    const Point2 s = basis.to_local(p);
    moments[0] += wf;
    moments[1] += wf * s.x;
    moments[2] += wf * s.y;
  });
  return moments;
}

Eigen::VectorXd local_load(std::span<const Point2> polygon, const ScaledMonomialBasis& basis, const ScalarField& f,
                           const ProjectorMatrix& oblique, QuadratureOrder order) {
  return oblique.transpose() * load_moments(polygon, basis, f, order);
}

ElementOperators build_element_operators(const PolygonalMesh& mesh, std::size_t cell_id,
                                         const AssemblyOptions& options) {
  if (options.stabilizer != Stabilizer::kDofIdentity) throw std::invalid_argument("unsupported stabilizer");
  ElementOperators op;
  op.cell_id = cell_id;
  const auto poly = mesh.cell_polygon(cell_id);
  op.geometry = polygon_geometry(poly, cell_id);
  op.basis = ScaledMonomialBasis(op.geometry);
  op.H = build_H(poly, op.basis);
  op.G = build_G(op.geometry);
  op.D = build_D(poly, op.basis);
  op.oblique = build_oblique_projector(op.D);
  op.elliptic = build_elliptic_projector(poly, op.basis, op.D, op.G);
  op.mass = local_mass(op.H, op.D, op.oblique, op.geometry.area);
  op.stiffness = local_stiffness(op.G, op.D, op.elliptic);
  return op;
}

std::vector<ElementOperators> build_all_element_operators(const PolygonalMesh& mesh, const AssemblyOptions& options) {
  std::vector<ElementOperators> ops;
  ops.reserve(mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) ops.push_back(build_element_operators(mesh, c, options));
  return ops;
}

GlobalSystem assemble_global(const PolygonalMesh& mesh, std::span<const ElementOperators> elements) {
  const auto n = static_cast<Eigen::Index>(mesh.num_vertices());
  std::vector<Eigen::Triplet<double>> mass_entries;
  std::vector<Eigen::Triplet<double>> stiff_entries;
  std::size_t block_total = 0;
  for (const auto& e : elements) block_total += e.geometry.n_vertices * e.geometry.n_vertices;
  mass_entries.reserve(block_total);
  stiff_entries.reserve(block_total);

  for (const auto& e : elements) {
    const auto& ids = mesh.cell(e.cell_id).vertex_ids;
    for (std::size_t a = 0; a < ids.size(); ++a)
      for (std::size_t b = 0; b < ids.size(); ++b) {
        if (ids[a] >= mesh.num_vertices() || ids[b] >= mesh.num_vertices())
          throw std::out_of_range("vertex index out of range in assembly");
        const auto ra = static_cast<Eigen::Index>(a);
        const auto cb = static_cast<Eigen::Index>(b);
        mass_entries.emplace_back(ids[a], ids[b], e.mass(ra, cb));
        stiff_entries.emplace_back(ids[a], ids[b], e.stiffness(ra, cb));
      }
  }

  GlobalSystem sys;
  sys.mass.resize(n, n);
  sys.stiffness.resize(n, n);
  sys.mass.setFromTriplets(mass_entries.begin(), mass_entries.end());
  sys.stiffness.setFromTriplets(stiff_entries.begin(), stiff_entries.end());
  sys.mass.makeCompressed();
  sys.stiffness.makeCompressed();

  sys.free_index.assign(mesh.num_vertices(), -1);
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    if (mesh.is_boundary_vertex(i)) continue;
    sys.free_index[i] = static_cast<std::ptrdiff_t>(sys.free_dofs.size());
    sys.free_dofs.push_back(i);
  }
  return sys;
}

Eigen::VectorXd assemble_load(const PolygonalMesh& mesh, std::span<const ElementOperators> elements,
                              const ScalarField& f, QuadratureOrder order) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (const auto& e : elements) {
    const auto poly = mesh.cell_polygon(e.cell_id);
    const Eigen::VectorXd local = local_load(poly, e.basis, f, e.oblique, order);
    const auto& ids = mesh.cell(e.cell_id).vertex_ids;
    for (std::size_t a = 0; a < ids.size(); ++a) load[static_cast<Eigen::Index>(ids[a])] += local[static_cast<Eigen::Index>(a)];
  }
  return load;
}

Eigen::VectorXd boundary_values(const PolygonalMesh& mesh, const SpaceTimeField& g, double t) {
  Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i)
    if (mesh.is_boundary_vertex(i)) values[static_cast<Eigen::Index>(i)] = g(mesh.vertex(i), t);
  return values;
}

SparseMatrix restrict_to_free(const SparseMatrix& a, const GlobalSystem& system) {
  const auto nf = static_cast<Eigen::Index>(system.num_free());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(a.nonZeros()));
  for (std::size_t r = 0; r < system.num_free(); ++r) {
    const auto row = static_cast<Eigen::Index>(system.free_dofs[r]);
    for (SparseMatrix::InnerIterator it(a, row); it; ++it) {
      const auto col = system.free_index[static_cast<std::size_t>(it.col())];
      if (col >= 0) entries.emplace_back(static_cast<Eigen::Index>(r), col, it.value());
    }
  }
  SparseMatrix out(nf, nf);
  out.setFromTriplets(entries.begin(), entries.end());
  out.makeCompressed();
  return out;
}

ReducedSystem apply_dirichlet(const SparseMatrix& a, const Eigen::VectorXd& rhs_full, const GlobalSystem& system,
                              const Eigen::VectorXd& boundary_full) {
  ReducedSystem out;
  out.matrix = restrict_to_free(a, system);
  out.rhs.resize(static_cast<Eigen::Index>(system.num_free()));
  for (std::size_t r = 0; r < system.num_free(); ++r) {
    const auto row = static_cast<Eigen::Index>(system.free_dofs[r]);
    double lift = 0.0;
    for (SparseMatrix::InnerIterator it(a, row); it; ++it)
      if (system.free_index[static_cast<std::size_t>(it.col())] < 0) lift += it.value() * boundary_full[it.col()];
    out.rhs[static_cast<Eigen::Index>(r)] = rhs_full[row] - lift;
  }
  return out;
}

Eigen::VectorXd expand_free(const Eigen::VectorXd& free_values, const GlobalSystem& system,
                            const Eigen::VectorXd& boundary_full) {
  Eigen::VectorXd full = boundary_full;
  for (std::size_t r = 0; r < system.num_free(); ++r)
    full[static_cast<Eigen::Index>(system.free_dofs[r])] = free_values[static_cast<Eigen::Index>(r)];
  return full;
}

Eigen::VectorXd gather_free(const Eigen::VectorXd& full, const GlobalSystem& system) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(system.num_free()));
  for (std::size_t r = 0; r < system.num_free(); ++r)
    out[static_cast<Eigen::Index>(r)] = full[static_cast<Eigen::Index>(system.free_dofs[r])];
  return out;
}

Eigen::VectorXd solve_steady(const GlobalSystem& system, const Eigen::VectorXd& load_full,
                             const Eigen::VectorXd& boundary_full) {
  const auto reduced = apply_dirichlet(system.stiffness, load_full, system, boundary_full);
  if (system.num_free() == 0) return boundary_full;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(Eigen::SparseMatrix<double>(reduced.matrix));
  if (solver.info() != Eigen::Success) throw std::runtime_error("steady solve: factorization failed");
  return expand_free(solver.solve(reduced.rhs), system, boundary_full);
}

void write_local_matrices(std::ostream& out, std::span<const ElementOperators> elements) {
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  auto dump = [&](const char* name, const Eigen::MatrixXd& m) {
    out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j) out << ' ';
        put(m(i, j));
      }
      out << '\n';
    }
  };
  for (const auto& e : elements) {
    out << "cell " << e.cell_id << '\n';
    dump("H", e.H);
    dump("D", e.D);
    dump("oblique", e.oblique);
    dump("elliptic", e.elliptic);
    dump("mass", e.mass);
    dump("stiffness", e.stiffness);
  }
}

VemDiscretization::VemDiscretization(PolygonalMesh mesh, AssemblyOptions options)
    : mesh_(std::move(mesh)), options_(options), elements_(build_all_element_operators(mesh_, options_)),
      system_(assemble_global(mesh_, elements_)) {}

Eigen::VectorXd VemDiscretization::load(const SpaceTimeField& f, double t) const {
  return assemble_load(mesh_, elements_, [&](Point2 p) { return f(p, t); }, options_.load_order);
}

}  // namespace pvem
