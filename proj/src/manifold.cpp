#include "curvedcc/manifold.hpp"

#include <algorithm>

#include "curvedcc/errors.hpp"
#include "curvedcc/tolerances.hpp"

namespace curvedcc {

Curvature curvature_from_int(int sigma) {
  if (sigma == 1) return Curvature::spherical;
  if (sigma == -1) return Curvature::hyperbolic;
  throw Error(ErrorCode::invalid_argument, "sigma must be +1 or -1, got " + std::to_string(sigma));
}

bool on_manifold(const AmbientVector& u, Curvature k, double tol) {
  const double s = sign(k);
  if (!(std::isfinite(u.x) && std::isfinite(u.y) && std::isfinite(u.z) && std::isfinite(u.w))) return false;
  if (std::abs(sdot(u, u, k) - s) > tol) return false;
  return k == Curvature::spherical || u.w > 0.0;
}

bool is_singular_dot(double dot, Curvature k) noexcept {
  if (k == Curvature::spherical) return !(std::abs(dot) < 1.0 - tol::clamp);
  return !(dot < -1.0 - tol::clamp);
}

double geodesic_distance(const AmbientVector& u, const AmbientVector& v, Curvature k) {
  const double dot = sdot(u, v, k);
  if (is_singular_dot(dot, k)) throw SingularPairError(-1, -1);
  if (k == Curvature::spherical) return std::acos(std::clamp(dot, -1.0, 1.0));
  return std::acosh(std::max(-dot, 1.0));
}

std::optional<AmbientVector> normalize_onto(const AmbientVector& u, Curvature k) {
  const double n2 = sign(k) * sdot(u, u, k);
  if (!(n2 > 0.0) || !std::isfinite(n2)) return std::nullopt;
  if (k == Curvature::hyperbolic && !(u.w > 0.0)) return std::nullopt;
  return u * (1.0 / std::sqrt(n2));
}

AmbientVector project_tangent(const AmbientVector& v, const AmbientVector& q, Curvature k) {
  // q.q = sigma on the manifold, so the normal coefficient is sigma (v.q).
  return v - (sign(k) * sdot(v, q, k)) * q;
}

AmbientVector apply_group(const GroupElement& g, const AmbientVector& u) {
  const double cp = std::cos(g.psi);
  const double sp = std::sin(g.psi);
  AmbientVector out;
  out.x = cp * u.x - sp * u.y;
  out.y = sp * u.x + cp * u.y;
  if (g.curvature == Curvature::spherical) {
    const double cc = std::cos(g.chi);
    const double sc = std::sin(g.chi);
    out.z = cc * u.z - sc * u.w;
    out.w = sc * u.z + cc * u.w;
  } else {
    const double ch = std::cosh(g.chi);
    const double sh = std::sinh(g.chi);
    out.z = ch * u.z - sh * u.w;
    out.w = -sh * u.z + ch * u.w;
  }
  return out;
}

PolarZW polar_zw(const AmbientVector& u, Curvature k, double rho_tol) {
  PolarZW p;
  if (k == Curvature::hyperbolic) {
    p.rho = std::sqrt(std::max(u.w * u.w - u.z * u.z, 0.0));
    p.phi = std::atanh(u.z / u.w);
    p.defined = true;
    return p;
  }
  p.rho = std::hypot(u.z, u.w);
  if (p.rho >= rho_tol) {
    p.phi = std::atan2(u.z, u.w);
    p.defined = true;
  }
  return p;
}

Vec3 stereographic(const AmbientVector& u, double pole_tol) {
  const double denom = 1.0 - u.z;
  if (std::abs(denom) < pole_tol) throw Error(ErrorCode::projection_pole, "point coincides with the projection pole (0,0,1,0)");
  return {u.x / denom, u.y / denom, u.w / denom};
}

Vec3 poincare_ball(const AmbientVector& u) {
  const double denom = 1.0 + u.w;
  return {u.x / denom, u.y / denom, u.z / denom};
}

}  // namespace curvedcc
