#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "pvem/errors.hpp"
#include "pvem/lcp_solvers.hpp"
#include "pvem/mesh_generators.hpp"
#include "test_support.hpp"

namespace pvem {
namespace {

StepSystem dense_step(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs) { return {testing::to_sparse(a), rhs}; }

SolverConfig pg_config() {
  SolverConfig c;
  c.method = LcpMethod::kProjectedGradient;
  c.max_iters = 200000;
  return c;
}

TEST(Lcp, OneDofActiveAndInactive) {
  for (const auto& cfg : {SolverConfig{}, pg_config()}) {
    const auto active = solve_lcp(dense_step(Eigen::MatrixXd::Constant(1, 1, 2.0), Eigen::VectorXd::Constant(1, -1.0)),
                                  Eigen::VectorXd::Zero(1), cfg);
    EXPECT_EQ(active.x[0], 0.0);
    EXPECT_EQ(active.diagnostics.complementarity_residual, 0.0);
    const auto inactive = solve_lcp(dense_step(Eigen::MatrixXd::Constant(1, 1, 2.0), Eigen::VectorXd::Constant(1, 1.0)),
                                    Eigen::VectorXd::Zero(1), cfg);
    EXPECT_NEAR(inactive.x[0], 0.5, 1e-10);
  }
}

TEST(Lcp, DecoupledIdentity) {
  const auto s = solve_psor(dense_step(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1.0, -1.0)),
                            Eigen::VectorXd::Zero(2), {});
  EXPECT_NEAR(s.x[0], 1.0, 1e-10);
  EXPECT_EQ(s.x[1], 0.0);
}

// Oracle: brute-force enumeration of the 2^10 support sets.
TEST(Lcp, PsorMatchesEnumeration) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd a = testing::random_spd(10, rng);
    Eigen::VectorXd b(10);
    for (auto& v : b) v = g(rng);
    const auto ref = testing::enumerate_lcp(a, b);
    ASSERT_TRUE(ref.has_value());
    SolverConfig cfg;
    cfg.max_iters = 100000;
    const auto s = solve_psor(dense_step(a, b), Eigen::VectorXd::Zero(10), cfg);
    EXPECT_LT((s.x - *ref).cwiseAbs().maxCoeff(), 1e-9) << "trial " << trial;
    EXPECT_LE(s.diagnostics.complementarity_residual, 1e-10);
    EXPECT_GE(s.x.minCoeff(), 0.0);
  }
}

// Oracle: plain sparse Cholesky solve when no constraint is active.
TEST(Lcp, MMatrixWithNonnegativeRhsIsUnconstrained) {
  const int n = 30;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 2.5;
    if (i > 0) a(i, i - 1) = a(i - 1, i) = -1.0;
  }
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(n, 0.0, 3.0);
  const Eigen::VectorXd ref = a.llt().solve(b);
  const auto s = solve_psor(dense_step(a, b), Eigen::VectorXd::Zero(n), {});
  EXPECT_LT((s.x - ref).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Lcp, ConfigErrors) {
  const auto step = dense_step(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1.0, 1.0));
  SolverConfig bad_omega;
  bad_omega.relaxation_omega = 2.0;
  EXPECT_THROW(solve_psor(step, Eigen::VectorXd::Zero(2), bad_omega), ConfigError);
  SolverConfig bad_beta = pg_config();
  bad_beta.beta = 2.5;
  EXPECT_THROW(solve_projected_gradient(step, Eigen::VectorXd::Zero(2), bad_beta), ConfigError);
  bad_beta.beta = -1.0;
  EXPECT_THROW(solve_projected_gradient(step, Eigen::VectorXd::Zero(2), bad_beta), ConfigError);
}

TEST(Lcp, IterationCapRaisesWithResidual) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd a = testing::random_spd(10, rng, 0.01);
  SolverConfig cfg;
  cfg.max_iters = 2;
  try {
    solve_psor(dense_step(a, Eigen::VectorXd::Ones(10)), Eigen::VectorXd::Zero(10), cfg);
    FAIL() << "expected NonConvergenceError";
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.iterations(), 2);
    EXPECT_GT(e.residual(), cfg.tol);
  }
}

TEST(Lcp, DefaultCapIsFiftyPerUnknown) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd a = testing::random_spd(4, rng, 1e-4);
  SolverConfig cfg;
  cfg.relaxation_omega = 0.01;
  try {
    solve_psor(dense_step(a, Eigen::VectorXd::Ones(4)), Eigen::VectorXd::Zero(4), cfg);
    FAIL() << "expected NonConvergenceError";
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.iterations(), 200);
  }
}

class AssembledSteps : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    disc_ = new VemDiscretization(generate_distorted_quad_mesh(10, 0.3, 2));
    steps_ = new std::vector<StepSystem>(testing::manufactured_step_systems(*disc_, TimeGrid(0.5, 20)));
  }
  static void TearDownTestSuite() {
    delete steps_;
    delete disc_;
  }
  static VemDiscretization* disc_;
  static std::vector<StepSystem>* steps_;
};
VemDiscretization* AssembledSteps::disc_ = nullptr;
std::vector<StepSystem>* AssembledSteps::steps_ = nullptr;

TEST_F(AssembledSteps, ProjectedGradientAgreesWithPsor) {
  for (const auto& step : *steps_) {
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(step.rhs.size());
    const auto a = solve_psor(step, x0, {});
    const auto b = solve_projected_gradient(step, x0, pg_config());
    EXPECT_LT((a.x - b.x).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST_F(AssembledSteps, EnergyMonotoneForSmallStep) {
  const auto& step = (*steps_)[7];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(step.A)};
  SolverConfig cfg = pg_config();
  cfg.beta = 1.0 / es.eigenvalues().maxCoeff();
  double prev = lcp_energy(step.A, step.rhs, Eigen::VectorXd::Zero(step.rhs.size()));
  int violations = 0;
  solve_projected_gradient(step, Eigen::VectorXd::Zero(step.rhs.size()), cfg, [&](int, const Eigen::VectorXd& x) {
    const double e = lcp_energy(step.A, step.rhs, x);
    if (e > prev + 1e-14 * std::abs(prev)) ++violations;
    prev = e;
  });
  EXPECT_EQ(violations, 0);
}

TEST_F(AssembledSteps, IterateDistanceNonIncreasing) {
  const auto& step = (*steps_)[12];
  Eigen::VectorXd last = Eigen::VectorXd::Zero(step.rhs.size());
  double prev = std::numeric_limits<double>::infinity();
  int violations = 0;
  solve_projected_gradient(step, last, pg_config(), [&](int, const Eigen::VectorXd& x) {
    const double d = (x - last).norm();
    if (d > prev * (1.0 + 1e-10) + 1e-15) ++violations;
    prev = d;
    last = x;
  });
  EXPECT_EQ(violations, 0);
}

TEST_F(AssembledSteps, SolutionMinimizesEnergyOnTheCone) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g(0.0, 1e-3);
  const auto& step = (*steps_)[10];
  const auto s = solve_psor(step, Eigen::VectorXd::Zero(step.rhs.size()), {});
  const double ix = lcp_energy(step.A, step.rhs, s.x);
  EXPECT_NEAR(ix, s.diagnostics.energy_final, 1e-15 * std::abs(ix) + 1e-300);
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd z = s.x;
    for (auto& v : z) v += g(rng);
    z = z.cwiseMax(0.0);
    EXPECT_LE(ix, lcp_energy(step.A, step.rhs, z) + 1e-9);
  }
}

TEST_F(AssembledSteps, IndependentOfStartingPoint) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  const auto& step = (*steps_)[15];
  const auto ref = solve_psor(step, Eigen::VectorXd::Zero(step.rhs.size()), {});
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd x0(step.rhs.size());
    for (auto& v : x0) v = u(rng);
    EXPECT_LT((solve_psor(step, x0, {}).x - ref.x).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((solve_projected_gradient(step, x0, pg_config()).x - ref.x).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(PowerMethod, EstimatesLargestEigenvalue) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd a = testing::random_spd(12, rng, 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const double est = estimate_lambda_max(testing::to_sparse(a), 200);
  EXPECT_NEAR(est, es.eigenvalues().maxCoeff(), 1e-6 * es.eigenvalues().maxCoeff());
}

}  // namespace
}  // namespace pvem
