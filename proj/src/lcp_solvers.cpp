#include "pvem/lcp_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pvem/errors.hpp"

namespace pvem {

namespace {

int iteration_cap(const StepSystem& step, const SolverConfig& config) {
  if (config.max_iters) return *config.max_iters;
  return 50 * static_cast<int>(step.rhs.size());
}

StepDiagnostics finish(const StepSystem& step, const Eigen::VectorXd& x, int iterations) {
  StepDiagnostics d;
  d.iterations = iterations;
  d.complementarity_residual = complementarity_residual(step.A, step.rhs, x);
  d.energy_final = lcp_energy(step.A, step.rhs, x);
  d.min_dof_value = x.size() ? x.minCoeff() : 0.0;
  return d;
}

}  // namespace

double complementarity_residual(const SparseMatrix& a, const Eigen::VectorXd& rhs, const Eigen::VectorXd& x) {
  if (x.size() == 0) return 0.0;
  const Eigen::VectorXd w = a * x - rhs;
  return x.cwiseMin(w).cwiseAbs().maxCoeff();
}

double lcp_energy(const SparseMatrix& a, const Eigen::VectorXd& rhs, const Eigen::VectorXd& x) {
  return x.dot(a * x) - 2.0 * rhs.dot(x);
}

double estimate_lambda_max(const SparseMatrix& a, int iterations) {
  if (a.rows() == 0) return 0.0;
  // Deterministic, non-symmetric start vector so no eigenvector is missed by symmetry.
  Eigen::VectorXd v(a.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(i));
  v.normalize();
  double lambda = 0.0;
  for (int k = 0; k < iterations; ++k) {
    Eigen::VectorXd w = a * v;
    lambda = v.dot(w);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
  }
  return std::max(lambda, v.dot(a * v));
}

LcpSolution solve_psor(const StepSystem& step, const Eigen::VectorXd& x0, const SolverConfig& config,
                       const IterationObserver& observer) {
  const double omega = config.relaxation_omega;
  if (!(omega > 0.0 && omega < 2.0)) throw ConfigError("PSOR relaxation must lie in (0, 2)");
  const auto& a = step.A;
  const Eigen::Index n = a.rows();
  if (x0.size() != n || step.rhs.size() != n) throw std::invalid_argument("PSOR: dimension mismatch");

  Eigen::VectorXd diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    diag[i] = a.coeff(i, i);
    if (!(diag[i] > 0.0)) throw std::invalid_argument("PSOR: non-positive diagonal at row " + std::to_string(i));
  }

  Eigen::VectorXd x = x0.cwiseMax(0.0);
  const int cap = iteration_cap(step, config);
  double residual = complementarity_residual(a, step.rhs, x);
  int it = 0;
  while (residual > config.tol) {
    if (it == cap)
      throw NonConvergenceError("PSOR did not converge in " + std::to_string(cap) +
                                    " sweeps (residual " + std::to_string(residual) + ")",
                                residual, it);
    for (Eigen::Index i = 0; i < n; ++i) {
      double ax = 0.0;
      for (SparseMatrix::InnerIterator e(a, i); e; ++e) ax += e.value() * x[e.col()];
      x[i] = std::max(0.0, x[i] + omega * (step.rhs[i] - ax) / diag[i]);
    }
    ++it;
    if (observer) observer(it, x);
    residual = complementarity_residual(a, step.rhs, x);
  }
  return {x, finish(step, x, it)};
}

LcpSolution solve_projected_gradient(const StepSystem& step, const Eigen::VectorXd& x0, const SolverConfig& config,
                                     const IterationObserver& observer) {
  const auto& a = step.A;
  if (x0.size() != a.rows() || step.rhs.size() != a.rows())
    throw std::invalid_argument("projected gradient: dimension mismatch");
  const double lambda = estimate_lambda_max(a, config.power_iterations);
  const double beta = config.beta.value_or(lambda > 0.0 ? 0.9 / lambda : 1.0);
  if (!(beta > 0.0) || (lambda > 0.0 && beta >= 2.0 / lambda))
    throw ConfigError("projected gradient step beta=" + std::to_string(beta) + " outside (0, 2/lambda_max) with lambda_max~" +
                      std::to_string(lambda));

  Eigen::VectorXd x = x0.cwiseMax(0.0);
  const int cap = iteration_cap(step, config);
  double residual = complementarity_residual(a, step.rhs, x);
  int it = 0;
  while (residual > config.tol) {
    if (it == cap)
      throw NonConvergenceError("projected gradient did not converge in " + std::to_string(cap) +
                                    " iterations (residual " + std::to_string(residual) + ")",
                                residual, it);
    x = (x - beta * (a * x - step.rhs)).cwiseMax(0.0);
    ++it;
    if (observer) observer(it, x);
    residual = complementarity_residual(a, step.rhs, x);
  }
  return {x, finish(step, x, it)};
}

LcpSolution solve_lcp(const StepSystem& step, const Eigen::VectorXd& x0, const SolverConfig& config) {
  if (config.method == LcpMethod::kProjectedGradient) return solve_projected_gradient(step, x0, config);
  return solve_psor(step, x0, config);
}

}  // namespace pvem
