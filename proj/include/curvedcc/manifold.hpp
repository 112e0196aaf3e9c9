#pragma once

#include <array>
#include <cmath>
#include <optional>

namespace curvedcc {

/// Sign of the ambient inner product: +1 for S^3 in R^4, -1 for H^3 in R^{3,1}.
enum class Curvature : int { hyperbolic = -1, spherical = 1 };

constexpr double sign(Curvature k) noexcept { return static_cast<int>(k) > 0 ? 1.0 : -1.0; }

/// Parses +1/-1 into a Curvature; throws Error(invalid_argument) otherwise.
Curvature curvature_from_int(int sigma);

/// A point or tangent vector in R^4 with components (x, y, z, w).
/// Layout is four contiguous doubles; the SIMD kernels rely on it.
struct AmbientVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double w = 0.0;

  constexpr double& operator[](int k) noexcept { return (&x)[k]; }
  constexpr double operator[](int k) const noexcept { return (&x)[k]; }

  constexpr AmbientVector& operator+=(const AmbientVector& o) noexcept {
    x += o.x; y += o.y; z += o.z; w += o.w;
    return *this;
  }
  constexpr AmbientVector& operator-=(const AmbientVector& o) noexcept {
    x -= o.x; y -= o.y; z -= o.z; w -= o.w;
    return *this;
  }
  constexpr AmbientVector& operator*=(double s) noexcept {
    x *= s; y *= s; z *= s; w *= s;
    return *this;
  }
  friend constexpr AmbientVector operator+(AmbientVector a, const AmbientVector& b) noexcept { return a += b; }
  friend constexpr AmbientVector operator-(AmbientVector a, const AmbientVector& b) noexcept { return a -= b; }
  friend constexpr AmbientVector operator*(double s, AmbientVector a) noexcept { return a *= s; }
  friend constexpr AmbientVector operator*(AmbientVector a, double s) noexcept { return a *= s; }
  friend constexpr AmbientVector operator-(AmbientVector a) noexcept { return a *= -1.0; }
  friend constexpr bool operator==(const AmbientVector&, const AmbientVector&) = default;
};
static_assert(sizeof(AmbientVector) == 4 * sizeof(double));

using Vec3 = std::array<double, 3>;

/// sigma-signed inner product x x' + y y' + z z' + sigma w w'.
constexpr double sdot(const AmbientVector& u, const AmbientVector& v, Curvature k) noexcept {
  return u.x * v.x + u.y * v.y + u.z * v.z + sign(k) * u.w * v.w;
}

/// Plain Euclidean inner product on R^4, used for least-squares fits and residual norms.
constexpr double edot(const AmbientVector& u, const AmbientVector& v) noexcept {
  return u.x * v.x + u.y * v.y + u.z * v.z + u.w * v.w;
}

inline double enorm(const AmbientVector& u) noexcept { return std::sqrt(edot(u, u)); }

bool on_manifold(const AmbientVector& u, Curvature k, double tol);

/// True when sdot(u, v) lies within the clamp band of the singular values
/// (+-1 on S^3, -1 on H^3), i.e. the two points collide or are antipodal.
bool is_singular_dot(double dot, Curvature k) noexcept;

/// arccos(u.v) on S^3, arccosh(-u.v) on H^3. Throws SingularPairError (with
/// indices -1,-1) on a collision or antipodal pair.
double geodesic_distance(const AmbientVector& u, const AmbientVector& v, Curvature k);

/// Retracts an ambient vector onto the manifold by radial scaling. Returns
/// nullopt when that is impossible (zero vector; spacelike or w <= 0 on H^3).
std::optional<AmbientVector> normalize_onto(const AmbientVector& u, Curvature k);

/// Removes the normal component of v at the on-manifold point q.
AmbientVector project_tangent(const AmbientVector& v, const AmbientVector& q, Curvature k);

/// Element of SO(2)xSO(2) (spherical) or SO(2)xSO(1,1) (hyperbolic):
/// rotation by psi in the xy-plane and rotation/boost by chi in the zw-plane.
struct GroupElement {
  double psi = 0.0;
  double chi = 0.0;
  Curvature curvature = Curvature::spherical;

  GroupElement inverse() const noexcept { return {-psi, -chi, curvature}; }
};

AmbientVector apply_group(const GroupElement& g, const AmbientVector& u);

struct PolarZW {
  double rho = 0.0;
  double phi = 0.0;  // meaningful only when defined
  bool defined = false;
};

/// Spherical: z = rho sin(phi), w = rho cos(phi). Hyperbolic: z = rho sinh(phi),
/// w = rho cosh(phi), always defined.
PolarZW polar_zw(const AmbientVector& u, Curvature k, double rho_tol);

/// Stereographic projection of S^3 from (0,0,1,0) onto the xyw-hyperplane.
Vec3 stereographic(const AmbientVector& u, double pole_tol = 1e-12);

/// Hyperboloid to Poincare ball: (x, y, z) / (1 + w).
Vec3 poincare_ball(const AmbientVector& u);

}  // namespace curvedcc
