#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "pvem/assembly.hpp"

namespace pvem {

/// One implicit step: find x >= 0 with A x - rhs >= 0 and x^T (A x - rhs) = 0.
struct StepSystem {
  SparseMatrix A;  // symmetric positive definite, free dofs only
  Eigen::VectorXd rhs;
};

enum class LcpMethod { kPsor, kProjectedGradient };

struct SolverConfig {
  LcpMethod method = LcpMethod::kPsor;
  double relaxation_omega = 1.5;
  /// Projected-gradient step; defaults to 0.9 / lambda_max(A).
  std::optional<double> beta;
  /// Absolute bound on the complementarity residual ||min(x, A x - rhs)||_inf.
  double tol = 1e-10;
  /// Defaults to 50 * (number of free dofs).
  std::optional<int> max_iters;
  int power_iterations = 30;
};

struct StepDiagnostics {
  int iterations = 0;
  double complementarity_residual = 0.0;
  /// I(x) = x^T A x - 2 rhs^T x.
  double energy_final = 0.0;
  double min_dof_value = 0.0;
};

struct LcpSolution {
  Eigen::VectorXd x;
  StepDiagnostics diagnostics;
};

/// Called after each iteration with the iteration count and current iterate.
using IterationObserver = std::function<void(int, const Eigen::VectorXd&)>;

double complementarity_residual(const SparseMatrix& a, const Eigen::VectorXd& rhs, const Eigen::VectorXd& x);
double lcp_energy(const SparseMatrix& a, const Eigen::VectorXd& rhs, const Eigen::VectorXd& x);

/// Power-method estimate of the largest eigenvalue of a symmetric matrix.
double estimate_lambda_max(const SparseMatrix& a, int iterations);

/// Projected SOR: Gauss-Seidel sweeps with clipping at zero. Throws
/// NonConvergenceError after max_iters sweeps, ConfigError for omega outside (0, 2).
LcpSolution solve_psor(const StepSystem& step, const Eigen::VectorXd& x0, const SolverConfig& config,
                       const IterationObserver& observer = {});

/// Projected fixed-point iteration x <- max(0, x - beta (A x - rhs)). Throws
/// ConfigError when beta is not in (0, 2 / lambda_max).
LcpSolution solve_projected_gradient(const StepSystem& step, const Eigen::VectorXd& x0, const SolverConfig& config,
                                     const IterationObserver& observer = {});

/// Dispatches on config.method.
LcpSolution solve_lcp(const StepSystem& step, const Eigen::VectorXd& x0, const SolverConfig& config);

}  // namespace pvem
