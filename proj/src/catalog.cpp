#include "curvedcc/catalog.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "curvedcc/errors.hpp"

namespace curvedcc::catalog {

namespace {

using std::numbers::pi;

void require_region(double c, double theta) {
  if (!region_valid(c, theta))
    throw Error(ErrorCode::region_invalid,
                "(c, theta) = (" + std::to_string(c) + ", " + std::to_string(theta) + ") outside the positive-mass region");
}

std::vector<AmbientVector> family_positions(int n, double c, double theta) {
  const double r = std::sqrt(1.0 - c * c);
  std::vector<AmbientVector> q;
  q.reserve(n + 2);
  q.push_back({0.0, 0.0, std::cos(theta), std::sin(theta)});
  q.push_back({0.0, 0.0, std::cos(theta), -std::sin(theta)});
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * pi * k / n;
    q.push_back({r * std::cos(a), r * std::sin(a), c, 0.0});
  }
  return q;
}

}  // namespace

bool region_valid(double c, double theta) noexcept {
  return (c > -1.0 && c < 0.0 && theta > 0.0 && theta < pi / 2) || (c > 0.0 && c < 1.0 && theta > pi / 2 && theta < pi);
}

Configuration pentatope() {
  const double s15 = std::sqrt(15.0);
  const double s5 = std::sqrt(5.0);
  const double s3 = std::sqrt(3.0);
  const double s6 = std::sqrt(6.0);
  const double s2 = std::sqrt(2.0);
  Configuration cfg;
  cfg.curvature = Curvature::spherical;
  cfg.masses.assign(5, 1.0);
  cfg.positions = {
      {1.0, 0.0, 0.0, 0.0},
      {-0.25, s15 / 4.0, 0.0, 0.0},
      {-0.25, -s5 / (4.0 * s3), s5 / s6, 0.0},
      {-0.25, -s5 / (4.0 * s3), -s5 / (2.0 * s6), s5 / (2.0 * s2)},
      {-0.25, -s5 / (4.0 * s3), -s5 / (2.0 * s6), -s5 / (2.0 * s2)},
  };
  return cfg;
}

double family_mass(double c, double theta) {
  require_region(c, theta);
  const double s2t = std::abs(std::sin(2.0 * theta));
  const double ct = std::cos(theta);
  return -3.0 * c * s2t * s2t * s2t / (2.0 * ct * std::pow(1.0 - c * c * ct * ct, 1.5));
}

Configuration family_q(double c, double theta) {
  const double m = family_mass(c, theta);
  Configuration cfg;
  cfg.curvature = Curvature::spherical;
  cfg.masses = {m, m, 1.0, 1.0, 1.0};
  cfg.positions = family_positions(3, c, theta);
  return cfg;
}

double lambda_single_formula(double c, double theta) noexcept {
  const double c2 = c * c;
  const double ct = std::cos(theta);
  const double s2t = std::abs(std::sin(2.0 * theta));
  const double triangle = -8.0 / (3.0 * std::sqrt(3.0) * std::pow(1.0 + 3.0 * c2, 1.5) * std::pow(1.0 - c2, 1.5));
  const double coupling = s2t * s2t * s2t / std::pow(1.0 - c2 * ct * ct, 3.0);
  return 1.5 * (triangle + coupling);
}

LambdaClosedForm lambda_closed_form(double c, double theta) {
  const double m = family_mass(c, theta);
  const double cos_d34 = 1.5 * c * c - 0.5;
  const double sin_d34 = std::sqrt((1.0 - cos_d34) * (1.0 + cos_d34));
  const double ct = std::cos(theta);
  const double sin3_d13 = std::pow(1.0 - c * c * ct * ct, 1.5);

  LambdaClosedForm out;
  out.lambda1 = -3.0 / (2.0 * sin_d34 * sin_d34 * sin_d34);
  out.lambda2 = -m * ct / (c * sin3_d13);
  out.lambda = out.lambda1 + out.lambda2;
  out.lambda_single = lambda_single_formula(c, theta);
  return out;
}

double ngon_balance_mass(int n, double c, double theta) {
  if (n < 3) throw Error(ErrorCode::invalid_argument, "n-gon needs n >= 3");
  require_region(c, theta);

  // With masses (1, m, 1, ..., 1) the force on body 0 equals F_1 / m of the
  // true configuration, so the balance is well defined down to m = 0. Body 0
  // is pulled only along e = (0, 0, sin t, -cos t).
  Configuration probe;
  probe.curvature = Curvature::spherical;
  probe.positions = family_positions(n, c, theta);
  probe.masses.assign(n + 2, 1.0);
  const AmbientVector e{0.0, 0.0, std::sin(theta), -std::cos(theta)};
  auto balance = [&](double m) {
    probe.masses[1] = m;
    return edot(grad_U(probe)[0], e);
  };

  double lo = 0.0;
  double hi = max_balance_mass;
  double f_lo = balance(lo);
  const double f_hi = balance(hi);
  if (f_lo == 0.0) return lo;
  if ((f_lo > 0.0) == (f_hi > 0.0)) throw Error(ErrorCode::no_mass_solution, "no balancing mass in (0, 1e3] for n = " + std::to_string(n));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = balance(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Configuration ngon_family(int n, double c, double theta) {
  const double m = ngon_balance_mass(n, c, theta);
  Configuration cfg;
  cfg.curvature = Curvature::spherical;
  cfg.positions = family_positions(n, c, theta);
  cfg.masses.assign(n + 2, 1.0);
  cfg.masses[0] = cfg.masses[1] = m;
  return cfg;
}

}  // namespace curvedcc::catalog
