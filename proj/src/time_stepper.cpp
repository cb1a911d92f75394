#include "pvem/time_stepper.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "pvem/errors.hpp"

namespace pvem {

TimeGrid::TimeGrid(double t_final, int n_steps) : t_final_(t_final), n_steps_(n_steps) {
  if (!(t_final > 0.0)) throw ConfigError("final time must be positive");
  if (n_steps < 1) throw ConfigError("number of time steps must be positive");
}

TimeGrid TimeGrid::from_step(double t_final, double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const double ratio = t_final / dt;
  const double steps = std::round(ratio);
  if (steps < 1.0 || std::abs(ratio - steps) > 1e-9 * ratio)
    throw ConfigError("final time " + std::to_string(t_final) + " is not a multiple of dt " + std::to_string(dt));
  return TimeGrid(t_final, static_cast<int>(steps));
}

Eigen::VectorXd set_initial_condition(const PolygonalMesh& mesh, const ScalarField& u0) {
  Eigen::VectorXd u(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    const double v = u0(mesh.vertex(i));
    if (!(v >= 0.0))
      throw InvalidInitialDataError("initial value " + std::to_string(v) + " at vertex " + std::to_string(i) +
                                    " violates u >= 0");
    u[static_cast<Eigen::Index>(i)] = v;
  }
  return u;
}

SparseMatrix step_matrix(const GlobalSystem& system, double dt) {
  SparseMatrix full = system.mass + dt * system.stiffness;
  return restrict_to_free(full, system);
}

StepSystem build_step_system(const GlobalSystem& system, const Eigen::VectorXd& u_prev, const Eigen::VectorXd& load_next,
                             const Eigen::VectorXd& boundary_next, double dt) {
  const SparseMatrix full = system.mass + dt * system.stiffness;
  const Eigen::VectorXd rhs_full = system.mass * u_prev + dt * load_next;
  auto reduced = apply_dirichlet(full, rhs_full, system, boundary_next);
  return {std::move(reduced.matrix), std::move(reduced.rhs)};
}

TimeStepper::TimeStepper(const VemDiscretization& discretization, ObstacleProblem problem, TimeGrid grid,
                         SolverConfig config)
    : disc_(discretization), problem_(std::move(problem)), grid_(grid), config_(std::move(config)) {
  const auto& sys = disc_.system();
  full_matrix_ = sys.mass + grid_.dt() * sys.stiffness;
  free_matrix_ = restrict_to_free(full_matrix_, sys);
  trajectory_.times.push_back(0.0);
  trajectory_.snapshots.push_back(set_initial_condition(disc_.mesh(), problem_.initial));
}

void TimeStepper::advance() {
  if (finished()) return;
  const auto& sys = disc_.system();
  const int n = static_cast<int>(trajectory_.num_steps());
  const double t_next = grid_.time(n + 1);
  const double dt = grid_.dt();
  const Eigen::VectorXd& u_prev = trajectory_.snapshots.back();

  const Eigen::VectorXd boundary_next = disc_.boundary(problem_.boundary, t_next);
  const Eigen::VectorXd rhs_full = sys.mass * u_prev + dt * disc_.load(problem_.forcing, t_next);
  auto reduced = apply_dirichlet(full_matrix_, rhs_full, sys, boundary_next);

  StepSystem step{free_matrix_, std::move(reduced.rhs)};
  const Eigen::VectorXd warm = gather_free(u_prev, sys).cwiseMax(0.0);
  LcpSolution solution;
  try {
    solution = solve_lcp(step, warm, config_);
  } catch (const NonConvergenceError& e) {
    throw StepFailure(static_cast<std::size_t>(n + 1), e.what());
  }
  trajectory_.times.push_back(t_next);
  trajectory_.snapshots.push_back(expand_free(solution.x, sys, boundary_next));
  trajectory_.diagnostics.push_back(solution.diagnostics);
}

const Trajectory& TimeStepper::run() {
  while (!finished()) advance();
  return trajectory_;
}

}  // namespace pvem
