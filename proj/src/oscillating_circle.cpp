#include "pvem/oscillating_circle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace pvem {

namespace oscillating_circle {

namespace {

constexpr double kOmega = 4.0 * std::numbers::pi;

/// Forcing with the circle state cached for the last time level queried.
class CachedForcing {
 public:
  double operator()(Point2 p, double t) const {
    if (t != t_) {
      t_ = t;
      s_ = state(t);
    }
    return forcing_f(p, s_);
  }

 private:
  mutable double t_ = std::numeric_limits<double>::quiet_NaN();
  mutable State s_{};
};

}  // namespace

State state(double t) {
  const double c = std::cos(kOmega * t);
  const double s = std::sin(kOmega * t);
  return {c / 3.0, s / 3.0, -kOmega * s / 3.0, kOmega * c / 3.0, 1.0 / 3.0 + 0.3 * s, 0.3 * kOmega * c};
}

double radius_squared(Point2 p, const State& s) {
  const double dx = p.x - s.c1;
  const double dy = p.y - s.c2;
  return dx * dx + dy * dy;
}

double exact_u(Point2 p, double t) {
  const State s = state(t);
  const double r2 = radius_squared(p, s);
  const double r02 = s.r0 * s.r0;
  if (r2 <= r02) return 0.0;
  const double d = r2 - r02;
  return 0.5 * d * d;
}

Point2 exact_grad_u(Point2 p, double t) {
  const State s = state(t);
  const double r2 = radius_squared(p, s);
  const double r02 = s.r0 * s.r0;
  if (r2 <= r02) return {0.0, 0.0};
  const double d = r2 - r02;
  return {2.0 * d * (p.x - s.c1), 2.0 * d * (p.y - s.c2)};
}

double exact_u_t(Point2 p, double t) {
  const State s = state(t);
  const double r2 = radius_squared(p, s);
  const double r02 = s.r0 * s.r0;
  if (r2 <= r02) return 0.0;
  const double q = (p.x - s.c1) * s.dc1 + (p.y - s.c2) * s.dc2;
  // d/dt (r^2 - r0^2) = -2 (q + r0 r0')
  return -2.0 * (r2 - r02) * (q + s.r0 * s.dr0);
}

double forcing_f(Point2 p, const State& s) {
  const double r2 = radius_squared(p, s);
  const double r02 = s.r0 * s.r0;
  if (r2 <= r02) return -4.0 * r02 * (1.0 - r2 + r02);
  const double q = (p.x - s.c1) * s.dc1 + (p.y - s.c2) * s.dc2;
  // u_t = -2 (r^2 - r0^2)(q + r0 r0'),  Laplace(u) = 4 (r^2 - r0^2) + 4 r^2.
  return 4.0 * (r02 - 2.0 * r2 - 0.5 * (r2 - r02) * (q + s.r0 * s.dr0));
}

double forcing_f(Point2 p, double t) { return forcing_f(p, state(t)); }

double boundary_g(Point2 p, double t) { return exact_u(p, t); }

double initial_u0(Point2 p) { return exact_u(p, 0.0); }

bool in_contact(Point2 p, double t) {
  const State s = state(t);
  return radius_squared(p, s) <= s.r0 * s.r0;
}

ObstacleProblem make_problem() {
  return {initial_u0, CachedForcing{}, boundary_g};
}

}  // namespace oscillating_circle

ObstacleProblem make_zero_problem() {
  return {[](Point2) { return 0.0; }, [](Point2, double) { return 0.0; }, [](Point2, double) { return 0.0; }};
}

}  // namespace pvem
