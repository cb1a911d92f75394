#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pvem/error_analysis.hpp"
#include "pvem/geometry.hpp"
#include "pvem/lcp_solvers.hpp"
#include "pvem/time_stepper.hpp"

namespace pvem {

enum class MeshFamily { kDistorted, kNonconvex, kVoronoi };
enum class ProblemKind { kOscillatingCircle, kZero };
enum class RefineAxis { kSpace, kTime };

/// Throws ConfigError for unknown names.
MeshFamily parse_mesh_family(const std::string& name);
std::string to_string(MeshFamily family);
ProblemKind parse_problem(const std::string& name);
std::string to_string(ProblemKind problem);
LcpMethod parse_solver(const std::string& name);
std::string to_string(LcpMethod method);

struct MeshSpec {
  MeshFamily family = MeshFamily::kDistorted;
  /// Cells per side for the grid families; seeds per side for Voronoi
  /// (resolution^2 seeds). Doubling it halves h for every family.
  int resolution = 8;
  std::uint64_t seed = 1;
  double distortion = 0.3;
  int lloyd_iterations = 100;
};

PolygonalMesh make_mesh(const MeshSpec& spec);

/// Resolution whose h matches the coarsest meshes of the space study
/// (about 0.36 / 0.30 / 0.20 for distorted / nonconvex / Voronoi).
int coarsest_space_resolution(MeshFamily family);
/// Resolution whose h matches the fixed meshes of the time study
/// (about 0.045 / 0.073 / 0.025).
int time_study_resolution(MeshFamily family);

struct RunConfig {
  MeshSpec mesh;
  ProblemKind problem = ProblemKind::kOscillatingCircle;
  double dt = 1e-3;
  double t_final = 0.5;
  SolverConfig solver;
  std::filesystem::path output_dir = "pvem_out";
  bool dump_snapshots = false;
  bool dump_local_matrices = false;
  /// Times at which a solution file (x, y, u_h, u) is written.
  std::vector<double> snapshot_times;

  void validate() const;
};

struct StudyConfig {
  RunConfig base;
  RefineAxis axis = RefineAxis::kSpace;
  int n_levels = 4;
  /// Levels dropped from the front of the rate fit (preasymptotic coarse levels).
  int skip_coarsest = 0;

  void validate() const;
};

struct RunResult {
  double mesh_size = 0.0;
  std::size_t n_cells = 0;
  std::size_t n_dofs = 0;
  std::size_t n_free = 0;
  TimeGrid grid{1.0, 1};
  Trajectory trajectory;
  ErrorSeries errors;
  double seconds = 0.0;
};

/// Single experiment on a prebuilt mesh (no output files).
RunResult run_experiment(const PolygonalMesh& mesh, const RunConfig& config);
/// Single experiment, mesh generated from config.mesh.
RunResult run_experiment(const RunConfig& config);

/// Mesh resolution or time step of a study level.
RunConfig study_level(const StudyConfig& study, int level);

/// Runs every level and fits the rate (no output files). `progress`, when
/// given, receives one line per finished level.
ConvergenceTable run_study(const StudyConfig& study, std::ostream* progress = nullptr);

// Output writers. Real numbers use 17 significant digits so identical runs
// produce identical bytes.

/// Header: step,time,e0,e1,e0_skipped,e1_skipped,iterations,residual,min_dof
void write_error_csv(std::ostream& out, const RunResult& result);
/// Header: level,parameter,error,max_e0,energy_e1,n_dofs,n_steps
void write_convergence_csv(std::ostream& out, const ConvergenceTable& table);
/// Header: x,y,u_h,u_exact
void write_solution_csv(std::ostream& out, const PolygonalMesh& mesh, const Eigen::VectorXd& dofs,
                        const SpaceTimeField* exact, double t);
/// One line per step: "time v_0 v_1 ...".
void write_snapshots(std::ostream& out, const Trajectory& trajectory);

std::string format_real(double v);

}  // namespace pvem
