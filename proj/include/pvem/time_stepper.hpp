#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "pvem/assembly.hpp"
#include "pvem/lcp_solvers.hpp"

namespace pvem {

/// Uniform partition of [0, T] into n_steps intervals.
class TimeGrid {
 public:
  TimeGrid(double t_final, int n_steps);
  /// Grid with step dt; t_final must be an integer multiple of dt (to 1e-9 relative).
  static TimeGrid from_step(double t_final, double dt);

  double t_final() const { return t_final_; }
  int n_steps() const { return n_steps_; }
  double dt() const { return t_final_ / n_steps_; }
  double time(int n) const { return n == n_steps_ ? t_final_ : n * dt(); }

 private:
  double t_final_;
  int n_steps_;
};

/// Data of the parabolic obstacle problem u >= 0.
struct ObstacleProblem {
  ScalarField initial;
  SpaceTimeField forcing;
  SpaceTimeField boundary;
};

/// Nodal interpolant of u0. Throws InvalidInitialDataError when a vertex value is negative.
Eigen::VectorXd set_initial_condition(const PolygonalMesh& mesh, const ScalarField& u0);

/// Step matrix M + dt K restricted to the free dofs.
SparseMatrix step_matrix(const GlobalSystem& system, double dt);

/// Step system for U^{n+1}: A = (M + dt K)_ff and rhs = (M U^n + dt b^{n+1})_f - A_fb g^{n+1}.
StepSystem build_step_system(const GlobalSystem& system, const Eigen::VectorXd& u_prev, const Eigen::VectorXd& load_next,
                             const Eigen::VectorXd& boundary_next, double dt);

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> snapshots;
  /// diagnostics[n] belongs to the step producing snapshots[n + 1].
  std::vector<StepDiagnostics> diagnostics;

  std::size_t num_steps() const { return diagnostics.size(); }
};

/// Backward-Euler stepping of the discrete inequality, one LCP per step.
class TimeStepper {
 public:
  TimeStepper(const VemDiscretization& discretization, ObstacleProblem problem, TimeGrid grid, SolverConfig config);

  const Trajectory& trajectory() const { return trajectory_; }
  const TimeGrid& grid() const { return grid_; }
  bool finished() const { return static_cast<int>(trajectory_.num_steps()) == grid_.n_steps(); }

  /// Appends one snapshot. Solver failures surface as StepFailure with the step index.
  void advance();
  const Trajectory& run();

 private:
  const VemDiscretization& disc_;
  ObstacleProblem problem_;
  TimeGrid grid_;
  SolverConfig config_;
  SparseMatrix full_matrix_;  // M + dt K
  SparseMatrix free_matrix_;
  Trajectory trajectory_;
};

}  // namespace pvem
