#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "curvedcc/ccstat.hpp"
#include "curvedcc/errors.hpp"

namespace curvedcc {

struct SolveOptions {
  int max_iter = 2000;
  double step_tol = 1e-15;
  double residual_tol = 1e-10;
  std::optional<double> lambda_init;  // fit_lambda of the initial configuration when empty
  double damping_init = 1e-3;
  std::uint64_t seed = 0;
  double fd_step = 1e-7;
  double min_init_distance = 0.1;
  int max_singular_retries = 3;
  bool marquardt_scaling = true;
  CCTolerances tolerances{};
};

enum class SolveStatus { converged, no_convergence, singular_pair };

const char* to_string(SolveStatus s);

struct SolveOutcome {
  bool converged = false;
  SolveStatus status = SolveStatus::no_convergence;
  Configuration config;
  CCReport report;
  int iterations = 0;
  std::vector<double> fingerprint;
};

/// Uniform on S^3 (normalized Gaussians) or Gaussian (x,y,z) lifted to H^3,
/// redrawn until every pairwise distance is at least min_distance.
Configuration random_configuration(Curvature k, std::span<const double> masses, std::mt19937_64& rng,
                                   double min_distance = 0.1);

/// Levenberg-Marquardt on the stacked residual [F_i - lambda grad_i I ; q_i.q_i - sigma]
/// over the 4N positions and lambda. Forces are evaluated at the radially
/// retracted positions, so the constraint rows pin the scale of each q_i.
/// Random initialization (seeded by opts.seed) when init is empty.
SolveOutcome find_cc(Curvature k, std::vector<double> masses, const std::optional<Configuration>& init,
                     const SolveOptions& opts = {});

/// Representative of the symmetry orbit: xy-rotation placing the body of
/// largest xy-radius (lowest index among ties) on the positive x-axis, plus
/// the boost onto H^2_xyw for coplanar hyperbolic configurations.
/// Throws Error(gauge_degenerate) when every body sits on the z,w-axes.
Configuration canonical_gauge(const Configuration& config, double rho_tol = tol::rho,
                              double coplanar_tol = tol::coplanar);

struct SpecialCurvePoint {
  double c = 0.0;
  std::vector<double> roots;       // ascending zeros of lambda(c, .) on the valid theta interval
  std::vector<double> max_force;   // max_i |F_i| of the assembled configuration at each root
  std::optional<ErrorCode> error;  // no_sign_change when the scan finds no bracket

  /// Root on the upper branch (largest theta).
  double theta_star() const { return roots.back(); }
};

/// Zeros of the closed-form lambda(c, theta) for each c: sign scan over 64
/// samples of the valid theta interval, then bisection to full precision.
std::vector<SpecialCurvePoint> special_curve(std::span<const double> c_grid);

}  // namespace curvedcc
