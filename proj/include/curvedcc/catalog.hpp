#pragma once

#include "curvedcc/dynamics.hpp"

// Exact configurations on S^3: the equal-mass pentatope and the two-parameter
// family of five bodies, two masses m on the zw-circle at (cos t, +-sin t)
// and an equilateral triangle (or regular n-gon) of unit masses at height z = c.
namespace curvedcc::catalog {

inline constexpr double max_balance_mass = 1e3;

/// (c, theta) in (-1,0)x(0,pi/2) or (0,1)x(pi/2,pi), where c cos(theta) < 0
/// and the balancing mass is positive.
bool region_valid(double c, double theta) noexcept;

/// Regular 4-simplex with five unit masses; every pairwise dot is -1/4.
Configuration pentatope();

/// m = -3c|sin^3 2t| / (2 cos t (1 - c^2 cos^2 t)^{3/2}). Throws Error(region_invalid).
double family_mass(double c, double theta);

/// Bodies ordered (m, m, 1, 1, 1). Throws Error(region_invalid).
Configuration family_q(double c, double theta);

struct LambdaClosedForm {
  double lambda1 = 0.0;  // triangle part, -3 / (2 sin^3 d34)
  double lambda2 = 0.0;  // coupling part, -m cos t / (c sin^3 d13)
  double lambda = 0.0;   // lambda1 + lambda2
  double lambda_single = 0.0;  // same multiplier through the single expression in (c, t)
};

LambdaClosedForm lambda_closed_form(double c, double theta);

/// Single-expression lambda(c, t) without the region check; used by the
/// special-curve scan.
double lambda_single_formula(double c, double theta) noexcept;

/// Mass m balancing the pair on the zw-circle against a regular n-gon of unit
/// masses, found by bisection on the tangential force on body 0 over (0, 1e3].
/// Throws Error(region_invalid) or Error(no_mass_solution).
double ngon_balance_mass(int n, double c, double theta);

/// Bodies ordered (m, m, 1 x n); n = 3 reproduces family_q.
Configuration ngon_family(int n, double c, double theta);

}  // namespace curvedcc::catalog
