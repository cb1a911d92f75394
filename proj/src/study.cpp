#include "pvem/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "pvem/assembly.hpp"
#include "pvem/errors.hpp"
#include "pvem/mesh_generators.hpp"
#include "pvem/oscillating_circle.hpp"

namespace pvem {

namespace {

ObstacleProblem problem_data(ProblemKind kind) {
  return kind == ProblemKind::kZero ? make_zero_problem() : oscillating_circle::make_problem();
}

SpaceTimeField exact_solution(ProblemKind kind) {
  if (kind == ProblemKind::kZero) return [](Point2, double) { return 0.0; };
  return oscillating_circle::exact_u;
}

}  // namespace

MeshFamily parse_mesh_family(const std::string& name) {
  if (name == "distorted") return MeshFamily::kDistorted;
  if (name == "nonconvex") return MeshFamily::kNonconvex;
  if (name == "voronoi") return MeshFamily::kVoronoi;
  throw ConfigError("unknown mesh family '" + name + "' (expected distorted, nonconvex or voronoi)");
}

std::string to_string(MeshFamily family) {
  switch (family) {
    case MeshFamily::kDistorted: return "distorted";
    case MeshFamily::kNonconvex: return "nonconvex";
    case MeshFamily::kVoronoi: return "voronoi";
  }
  return "?";
}

ProblemKind parse_problem(const std::string& name) {
  if (name == "oscillating-circle") return ProblemKind::kOscillatingCircle;
  if (name == "zero") return ProblemKind::kZero;
  throw ConfigError("unknown problem '" + name + "' (expected oscillating-circle or zero)");
}

std::string to_string(ProblemKind problem) {
  return problem == ProblemKind::kZero ? "zero" : "oscillating-circle";
}

LcpMethod parse_solver(const std::string& name) {
  if (name == "psor") return LcpMethod::kPsor;
  if (name == "projected-gradient") return LcpMethod::kProjectedGradient;
  throw ConfigError("unknown solver '" + name + "' (expected psor or projected-gradient)");
}

std::string to_string(LcpMethod method) {
  return method == LcpMethod::kProjectedGradient ? "projected-gradient" : "psor";
}

PolygonalMesh make_mesh(const MeshSpec& spec) {
  switch (spec.family) {
    case MeshFamily::kDistorted:
      return generate_distorted_quad_mesh(spec.resolution, spec.distortion, spec.seed);
    case MeshFamily::kNonconvex:
      return generate_nonconvex_mesh(spec.resolution);
    case MeshFamily::kVoronoi:
      if (spec.resolution < 2) throw ConfigError("Voronoi resolution must be at least 2");
      return generate_voronoi_mesh(spec.resolution * spec.resolution, spec.lloyd_iterations, spec.seed);
  }
  throw ConfigError("unknown mesh family");
}

int coarsest_space_resolution(MeshFamily family) {
  switch (family) {
    case MeshFamily::kDistorted: return 8;   // h ~ 0.38
    case MeshFamily::kNonconvex: return 9;   // h ~ 0.31
    case MeshFamily::kVoronoi: return 16;    // h ~ 0.19
  }
  return 8;
}

int time_study_resolution(MeshFamily family) {
  switch (family) {
    case MeshFamily::kDistorted: return 68;  // h ~ 0.045
    case MeshFamily::kNonconvex: return 39;  // h ~ 0.073
    case MeshFamily::kVoronoi: return 122;   // h ~ 0.025
  }
  return 68;
}

void RunConfig::validate() const {
  if (mesh.resolution < 2) throw ConfigError("resolution must be at least 2");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(t_final > 0.0)) throw ConfigError("t_final must be positive");
  if (!(mesh.distortion >= 0.0 && mesh.distortion < 0.5)) throw ConfigError("distortion must lie in [0, 0.5)");
  if (mesh.lloyd_iterations < 0) throw ConfigError("lloyd_iterations must be non-negative");
  if (!(solver.relaxation_omega > 0.0 && solver.relaxation_omega < 2.0)) throw ConfigError("omega must lie in (0, 2)");
  if (solver.beta && !(*solver.beta > 0.0)) throw ConfigError("beta must be positive");
  if (!(solver.tol > 0.0)) throw ConfigError("tol must be positive");
  if (solver.max_iters && *solver.max_iters < 1) throw ConfigError("max_iters must be positive");
  for (double t : snapshot_times)
    if (!(t >= 0.0 && t <= t_final)) throw ConfigError("snapshot time outside [0, t_final]");
  (void)TimeGrid::from_step(t_final, dt);
}

void StudyConfig::validate() const {
  base.validate();
  if (n_levels < 3) throw ConfigError("a convergence study needs at least 3 levels (got " + std::to_string(n_levels) + ")");
  if (skip_coarsest < 0 || n_levels - skip_coarsest < 3)
    throw ConfigError("skip_coarsest leaves fewer than 3 levels for the rate fit");
}

RunResult run_experiment(const PolygonalMesh& mesh, const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.grid = TimeGrid::from_step(config.t_final, config.dt);

  VemDiscretization disc(mesh);
  TimeStepper stepper(disc, problem_data(config.problem), result.grid, config.solver);
  result.trajectory = stepper.run();
  result.errors = error_norms(result.trajectory, disc.mesh(), disc.mass(), disc.stiffness(),
                              exact_solution(config.problem), result.grid.dt());

  result.mesh_size = mesh.mesh_size();
  result.n_cells = mesh.num_cells();
  result.n_dofs = mesh.num_vertices();
  result.n_free = disc.system().num_free();
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

RunResult run_experiment(const RunConfig& config) {
  config.validate();
  return run_experiment(make_mesh(config.mesh), config);
}

RunConfig study_level(const StudyConfig& study, int level) {
  RunConfig cfg = study.base;
  if (study.axis == RefineAxis::kSpace)
    cfg.mesh.resolution = study.base.mesh.resolution << level;
  else
    cfg.dt = study.base.dt / std::ldexp(1.0, level);
  return cfg;
}

ConvergenceTable run_study(const StudyConfig& study, std::ostream* progress) {
  study.validate();
  ConvergenceTable table;
  table.axis = study.axis == RefineAxis::kSpace ? "space" : "time";

  // The time study reuses one mesh for every level.
  std::optional<PolygonalMesh> fixed_mesh;
  if (study.axis == RefineAxis::kTime) fixed_mesh = make_mesh(study.base.mesh);

  for (int level = 0; level < study.n_levels; ++level) {
    const RunConfig cfg = study_level(study, level);
    cfg.validate();
    const RunResult r = fixed_mesh ? run_experiment(*fixed_mesh, cfg) : run_experiment(cfg);
    ConvergenceRow row;
    row.parameter = study.axis == RefineAxis::kSpace ? r.mesh_size : cfg.dt;
    row.error = r.errors.combined;
    row.n_dofs = r.n_dofs;
    row.n_steps = r.grid.n_steps();
    for (double e : r.errors.e0) row.max_e0 = std::max(row.max_e0, e);
    row.energy_e1 = r.errors.combined - row.max_e0;
    table.rows.push_back(row);
    if (progress)
      *progress << table.axis << " level " << level << ": h=" << r.mesh_size << " dt=" << cfg.dt
                << " dofs=" << r.n_dofs << " error=" << row.error << " (" << r.seconds << " s)\n";
  }
  table.fitted_slope = fit_rate(table, static_cast<std::size_t>(study.skip_coarsest)).slope;
  return table;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_error_csv(std::ostream& out, const RunResult& result) {
  out << "step,time,e0,e1,e0_skipped,e1_skipped,iterations,residual,min_dof\n";
  const auto& e = result.errors;
  for (std::size_t n = 0; n < e.times.size(); ++n) {
    out << n << ',' << format_real(e.times[n]) << ',' << format_real(e.e0[n]) << ',' << format_real(e.e1[n]) << ','
        << (e.e0_skipped[n] ? 1 : 0) << ',' << (e.e1_skipped[n] ? 1 : 0) << ',';
    if (n == 0) {
      out << "0,0,0\n";
      continue;
    }
    const auto& d = result.trajectory.diagnostics[n - 1];
    out << d.iterations << ',' << format_real(d.complementarity_residual) << ',' << format_real(d.min_dof_value)
        << '\n';
  }
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table) {
  out << "level,parameter,error,max_e0,energy_e1,n_dofs,n_steps\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    out << i << ',' << format_real(r.parameter) << ',' << format_real(r.error) << ',' << format_real(r.max_e0) << ','
        << format_real(r.energy_e1) << ',' << r.n_dofs << ',' << r.n_steps << '\n';
  }
}

void write_solution_csv(std::ostream& out, const PolygonalMesh& mesh, const Eigen::VectorXd& dofs,
                        const SpaceTimeField* exact, double t) {
  out << "x,y,u_h,u_exact\n";
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    const auto& p = mesh.vertex(i);
    out << format_real(p.x) << ',' << format_real(p.y) << ',' << format_real(dofs[static_cast<Eigen::Index>(i)]) << ','
        << format_real(exact ? (*exact)(p, t) : 0.0) << '\n';
  }
}

void write_snapshots(std::ostream& out, const Trajectory& trajectory) {
  for (std::size_t n = 0; n < trajectory.snapshots.size(); ++n) {
    out << format_real(trajectory.times[n]);
    for (Eigen::Index i = 0; i < trajectory.snapshots[n].size(); ++i) out << ' ' << format_real(trajectory.snapshots[n][i]);
    out << '\n';
  }
}

}  // namespace pvem
