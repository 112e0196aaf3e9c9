#pragma once

namespace curvedcc::tol {

// Distance from the singular set below which a pair is rejected.
inline constexpr double clamp = 1e-12;
// Minimum zw-radius for the spherical polar decomposition to define an angle.
inline constexpr double rho = 1e-10;
// Accepted deviation of q.q from sigma for a position to count as on-manifold.
inline constexpr double on_manifold = 1e-10;
inline constexpr double lambda = 1e-9;
inline constexpr double cc = 1e-9;
inline constexpr double rank = 1e-8;
inline constexpr double coplanar = 1e-8;
// Below this sum of squared |grad I| the lambda fit is reported degenerate.
inline constexpr double fit_denominator = 1e-24;
inline constexpr double fingerprint = 1e-6;

}  // namespace curvedcc::tol
