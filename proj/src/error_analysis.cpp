#include "pvem/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "pvem/errors.hpp"

namespace pvem {

Eigen::VectorXd interpolant_dofs(const PolygonalMesh& mesh, const SpaceTimeField& u, double t) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) v[static_cast<Eigen::Index>(i)] = u(mesh.vertex(i), t);
  return v;
}

bool ErrorSeries::any_skipped() const {
  return std::any_of(e0_skipped.begin(), e0_skipped.end(), [](bool b) { return b; }) ||
         std::any_of(e1_skipped.begin(), e1_skipped.end(), [](bool b) { return b; });
}

ErrorSeries error_norms(const Trajectory& trajectory, const PolygonalMesh& mesh, const SparseMatrix& mass,
                        const SparseMatrix& stiffness, const SpaceTimeField& exact, double dt) {
  ErrorSeries out;
  const std::size_t n = trajectory.snapshots.size();
  double max_e0 = 0.0;
  double sum_e1 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = trajectory.times[k];
    const Eigen::VectorXd ref = interpolant_dofs(mesh, exact, t);
    const Eigen::VectorXd err = trajectory.snapshots[k] - ref;

    const double m_ref = ref.dot(mass * ref);
    const double a_ref = ref.dot(stiffness * ref);
    const bool skip0 = !(m_ref > 0.0);
    const bool skip1 = !(a_ref > 0.0);
    const double e0 = skip0 ? 0.0 : std::sqrt(std::max(0.0, err.dot(mass * err)) / m_ref);
    const double e1 = skip1 ? 0.0 : std::sqrt(std::max(0.0, err.dot(stiffness * err)) / a_ref);

    out.times.push_back(t);
    out.e0.push_back(e0);
    out.e1.push_back(e1);
    out.e0_skipped.push_back(skip0);
    out.e1_skipped.push_back(skip1);
    max_e0 = std::max(max_e0, e0);
    sum_e1 += e1 * e1;
  }
  out.combined = max_e0 + std::sqrt(dt * sum_e1);
  return out;
}

RateFit fit_rate(const std::vector<double>& parameters, const std::vector<double>& errors) {
  if (parameters.size() != errors.size()) throw std::invalid_argument("fit_rate: size mismatch");
  RateFit fit;
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !(parameters[i] > 0.0)) {
      std::cerr << "warning: fit_rate drops row " << i << " (non-positive value)\n";
      fit.excluded.push_back(i);
      continue;
    }
    lx.push_back(std::log(parameters[i]));
    ly.push_back(std::log(errors[i]));
  }
  if (lx.size() < 3) throw ConfigError("rate fit needs at least 3 positive points, got " + std::to_string(lx.size()));

  const double n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw ConfigError("rate fit needs distinct parameter values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points_used = lx.size();
  return fit;
}

RateFit fit_rate(const ConvergenceTable& table, std::size_t skip_coarsest) {
  std::vector<double> p;
  std::vector<double> e;
  for (std::size_t i = skip_coarsest; i < table.rows.size(); ++i) {
    p.push_back(table.rows[i].parameter);
    e.push_back(table.rows[i].error);
  }
  auto fit = fit_rate(p, e);
  for (auto& idx : fit.excluded) idx += skip_coarsest;
  return fit;
}

}  // namespace pvem
