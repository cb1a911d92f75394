#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pvem/oscillating_circle.hpp"
#include "test_support.hpp"

namespace pvem {
namespace {

namespace oc = oscillating_circle;

TEST(OscillatingCircle, CircleState) {
  const auto s = oc::state(0.0);
  EXPECT_NEAR(s.c1, 1.0 / 3.0, 1e-16);
  EXPECT_NEAR(s.c2, 0.0, 1e-16);
  EXPECT_NEAR(s.r0, 1.0 / 3.0, 1e-16);
  EXPECT_NEAR(s.dc2, 4.0 * M_PI / 3.0, 1e-14);
  EXPECT_NEAR(s.dr0, 0.3 * 4.0 * M_PI, 1e-14);
  for (double t = 0.0; t <= 0.5; t += 0.01) {
    const double r0 = oc::state(t).r0;
    EXPECT_GE(r0, 1.0 / 3.0 - 0.3 - 1e-15);
    EXPECT_LE(r0, 1.0 / 3.0 + 0.3 + 1e-15);
  }
}

TEST(OscillatingCircle, ExactSolutionValues) {
  const auto s = oc::state(0.2);
  EXPECT_EQ(oc::exact_u({s.c1, s.c2}, 0.2), 0.0);
  EXPECT_TRUE(oc::in_contact({s.c1, s.c2}, 0.2));
  EXPECT_NEAR(oc::exact_u({1.0, 1.0}, 0.0), 8.0 / 9.0, 1e-15);
  EXPECT_EQ(oc::initial_u0({1.0, 1.0}), oc::exact_u({1.0, 1.0}, 0.0));
  EXPECT_EQ(oc::boundary_g({1.0, 1.0}, 0.37), oc::exact_u({1.0, 1.0}, 0.37));
  EXPECT_EQ(oc::initial_u0({1.0 / 3.0, 0.0}), 0.0);
}

TEST(OscillatingCircle, AgreesWithExtendedPrecisionReference) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), ut(0.0, 0.5);
  for (int k = 0; k < 1000; ++k) {
    const Point2 p{ux(rng), ux(rng)};
    const double t = ut(rng);
    EXPECT_NEAR(oc::exact_u(p, t), static_cast<double>(testing::reference_u(p.x, p.y, t)), 1e-14);
  }
}

TEST(OscillatingCircle, GradientAndTimeDerivativeMatchDifferences) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), ut(0.01, 0.49);
  const double h = 1e-6;
  for (int k = 0; k < 500; ++k) {
    const Point2 p{ux(rng), ux(rng)};
    const double t = ut(rng);
    const auto g = oc::exact_grad_u(p, t);
    const double gx = (oc::exact_u({p.x + h, p.y}, t) - oc::exact_u({p.x - h, p.y}, t)) / (2 * h);
    const double gy = (oc::exact_u({p.x, p.y + h}, t) - oc::exact_u({p.x, p.y - h}, t)) / (2 * h);
    const double dt = (oc::exact_u(p, t + h) - oc::exact_u(p, t - h)) / (2 * h);
    EXPECT_NEAR(g.x, gx, 1e-7 * std::max(1.0, std::abs(gx)));
    EXPECT_NEAR(g.y, gy, 1e-7 * std::max(1.0, std::abs(gy)));
    EXPECT_NEAR(oc::exact_u_t(p, t), dt, 1e-6 * std::max(1.0, std::abs(dt)));
  }
}

TEST(OscillatingCircle, ContactBranchClosedForm) {
  for (double t : {0.0, 0.1, 0.3}) {
    const auto s = oc::state(t);
    EXPECT_NEAR(oc::forcing_f({s.c1, s.c2}, t), -4.0 * s.r0 * s.r0 * (1.0 + s.r0 * s.r0), 1e-14);
  }
}

// Oracle: extended-precision central differences of u_t - Laplace(u).
TEST(OscillatingCircle, ForcingMatchesHeatOperator) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), ut(0.0, 0.5);
  int checked = 0;
  for (int k = 0; k < 2000; ++k) {
    const Point2 p{ux(rng), ux(rng)};
    const double t = ut(rng);
    const auto s = oc::state(t);
    const double r = std::sqrt(oc::radius_squared(p, s));
    if (r - s.r0 < 1e-3) continue;
    const double f = oc::forcing_f(p, t);
    EXPECT_NEAR(f, testing::fd_heat_operator(p, t, 1e-5), 1e-5 * std::max(1.0, std::abs(f)));
    ++checked;
  }
  EXPECT_GT(checked, 1500);
}

TEST(OscillatingCircle, ForcingContinuousAcrossFreeBoundary) {
  for (double t : {0.05, 0.2, 0.45}) {
    const auto s = oc::state(t);
    for (double a = 0.0; a < 6.28; a += 0.5) {
      const Point2 in{s.c1 + (s.r0 - 1e-9) * std::cos(a), s.c2 + (s.r0 - 1e-9) * std::sin(a)};
      const Point2 out{s.c1 + (s.r0 + 1e-9) * std::cos(a), s.c2 + (s.r0 + 1e-9) * std::sin(a)};
      EXPECT_NEAR(oc::forcing_f(in, t), oc::forcing_f(out, t), 1e-6);
    }
  }
}

// At t = 0 the centre moves vertically, so p = (y - c2) c2' flips sign under
// reflection through the centre while every radial term is unchanged.
TEST(OscillatingCircle, ReflectedPairsDifferOnlyThroughP) {
  const auto s = oc::state(0.0);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI), rad(0.4, 0.6);
  for (int k = 0; k < 100; ++k) {
    const double a = ang(rng), r = rad(rng);
    const Point2 p{s.c1 + r * std::cos(a), s.c2 + r * std::sin(a)};
    const Point2 q{s.c1 - r * std::cos(a), s.c2 - r * std::sin(a)};
    const double pp = (p.y - s.c2) * s.dc2;
    EXPECT_NEAR(oc::forcing_f(p, 0.0) - oc::forcing_f(q, 0.0), -4.0 * (r * r - s.r0 * s.r0) * pp, 1e-12);
  }
  // Horizontal pair: p vanishes and the values coincide.
  EXPECT_NEAR(oc::forcing_f({s.c1 + 0.5, s.c2}, 0.0), oc::forcing_f({s.c1 - 0.5, s.c2}, 0.0), 1e-13);
}

TEST(OscillatingCircle, NonnegativeEverywhere) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), ut(0.0, 0.5);
  for (int k = 0; k < 100000; ++k) ASSERT_GE(oc::exact_u({ux(rng), ux(rng)}, ut(rng)), 0.0);
}

TEST(OscillatingCircle, BoundaryDataNonnegativeAndOutsideContact) {
  for (int i = 0; i <= 400; ++i) {
    const double s = -1.0 + 2.0 * i / 400.0;
    for (int n = 0; n <= 500; ++n) {
      const double t = 0.5 * n / 500.0;
      for (Point2 p : {Point2{s, -1.0}, Point2{s, 1.0}, Point2{-1.0, s}, Point2{1.0, s}}) {
        ASSERT_GE(oc::boundary_g(p, t), 0.0);
        ASSERT_FALSE(oc::in_contact(p, t));
      }
    }
  }
}

TEST(OscillatingCircle, FreeBoundaryIsC1) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI), ut(0.0, 0.5);
  for (int k = 0; k < 1000; ++k) {
    const double t = ut(rng), a = ang(rng);
    const auto s = oc::state(t);
    const Point2 p{s.c1 + s.r0 * std::cos(a), s.c2 + s.r0 * std::sin(a)};
    EXPECT_LE(std::abs(oc::exact_u(p, t)), 1e-12);
    EXPECT_LE(norm(oc::exact_grad_u(p, t)), 1e-8);
  }
}

TEST(OscillatingCircle, ForcingNonpositiveDeepInContact) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI), frac(0.0, 0.9), ut(0.0, 0.5);
  for (int k = 0; k < 10000; ++k) {
    const double t = ut(rng), a = ang(rng);
    const auto s = oc::state(t);
    const double r = frac(rng) * s.r0;
    EXPECT_LE(oc::forcing_f({s.c1 + r * std::cos(a), s.c2 + r * std::sin(a)}, t), 0.0);
  }
}

TEST(OscillatingCircle, ProblemBundle) {
  const auto prob = oc::make_problem();
  const Point2 p{0.7, -0.4};
  EXPECT_EQ(prob.initial(p), oc::initial_u0(p));
  EXPECT_EQ(prob.boundary(p, 0.3), oc::boundary_g(p, 0.3));
  EXPECT_EQ(prob.forcing(p, 0.3), oc::forcing_f(p, 0.3));
  EXPECT_EQ(prob.forcing(p, 0.1), oc::forcing_f(p, 0.1));
}

}  // namespace
}  // namespace pvem
