#pragma once

#include "pvem/geometry.hpp"
#include "pvem/time_stepper.hpp"

namespace pvem {

/// Manufactured obstacle problem on [-1,1]^2 whose contact set is a disk of
/// radius r0(t) = 1/3 + 0.3 sin(4 pi t) centred at (cos(4 pi t), sin(4 pi t)) / 3.
/// Outside the disk u = (r^2 - r0^2)^2 / 2, inside u = 0.
namespace oscillating_circle {

inline constexpr double kFinalTime = 0.5;

/// Time-dependent quantities of the moving circle.
struct State {
  double c1, c2;    // centre
  double dc1, dc2;  // centre velocity
  double r0, dr0;   // radius and its time derivative
};

State state(double t);

/// Squared distance to the moving centre.
double radius_squared(Point2 p, const State& s);

double exact_u(Point2 p, double t);
Point2 exact_grad_u(Point2 p, double t);
/// u_t; zero inside the contact set.
double exact_u_t(Point2 p, double t);

/// f = u_t - Laplace(u) on the noncontact set, -4 r0^2 (1 - r^2 + r0^2) on the contact set.
double forcing_f(Point2 p, double t);
double forcing_f(Point2 p, const State& s);

double boundary_g(Point2 p, double t);
double initial_u0(Point2 p);

/// True when p lies in the contact set (r <= r0).
bool in_contact(Point2 p, double t);

/// Problem data ready for the time stepper. The forcing precomputes the
/// circle state once per time level.
ObstacleProblem make_problem();

}  // namespace oscillating_circle

/// Homogeneous data: f = 0, g = 0, u0 = 0.
ObstacleProblem make_zero_problem();

}  // namespace pvem
