#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pvem/assembly.hpp"
#include "pvem/time_stepper.hpp"

namespace pvem {

/// Vertex values u(x_i, t).
Eigen::VectorXd interpolant_dofs(const PolygonalMesh& mesh, const SpaceTimeField& u, double t);

/// Relative errors of U^n against the nodal interpolant I_h u(t^n):
///   E0^n = sqrt(m_h(e,e) / m_h(I_h u, I_h u)),  E1^n = sqrt(a_h(e,e) / a_h(I_h u, I_h u)),
///   combined = max_n E0^n + sqrt(dt * sum_n (E1^n)^2).
/// Levels whose denominator vanishes contribute 0 and are flagged.
struct ErrorSeries {
  std::vector<double> times;
  std::vector<double> e0;
  std::vector<double> e1;
  std::vector<bool> e0_skipped;
  std::vector<bool> e1_skipped;
  double combined = 0.0;

  bool any_skipped() const;
};

ErrorSeries error_norms(const Trajectory& trajectory, const PolygonalMesh& mesh, const SparseMatrix& mass,
                        const SparseMatrix& stiffness, const SpaceTimeField& exact, double dt);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points_used = 0;
  /// Rows dropped because their error was not positive.
  std::vector<std::size_t> excluded;
};

struct ConvergenceRow {
  double parameter = 0.0;  // h or dt
  double error = 0.0;      // combined error
  std::size_t n_dofs = 0;
  int n_steps = 0;
  double max_e0 = 0.0;
  double energy_e1 = 0.0;
};

struct ConvergenceTable {
  std::string axis;  // "space" or "time"
  std::vector<ConvergenceRow> rows;
  double fitted_slope = 0.0;
};

/// Least-squares slope of log(error) against log(parameter). Throws ConfigError
/// with fewer than 3 usable points.
RateFit fit_rate(const std::vector<double>& parameters, const std::vector<double>& errors);
RateFit fit_rate(const ConvergenceTable& table, std::size_t skip_coarsest = 0);

}  // namespace pvem
