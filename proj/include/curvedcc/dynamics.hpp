#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "curvedcc/manifold.hpp"
#include "curvedcc/tolerances.hpp"

namespace curvedcc {

/// N point masses on S^3 or H^3.
struct Configuration {
  Curvature curvature = Curvature::spherical;
  std::vector<double> masses;
  std::vector<AmbientVector> positions;

  std::size_t size() const noexcept { return positions.size(); }
};

/// Checks N >= 2, positive finite masses, every position on the manifold
/// within on_tol, and no pair in the singular set. Throws Error(invalid_config)
/// or SingularPairError naming the offending pair.
void validate(const Configuration& config, double on_tol = tol::on_manifold);

Configuration apply_group(const GroupElement& g, const Configuration& config);

/// Geodesic distance between bodies i and j; SingularPairError carries (i, j).
double pair_distance(const Configuration& config, int i, int j);

/// Distances d_ij for i < j in lexicographic pair order.
std::vector<double> pairwise_distances(const Configuration& config);

/// Sorted pairwise distances; identifies a configuration up to isometry.
std::vector<double> fingerprint(const Configuration& config);

bool fingerprints_match(const std::vector<double>& a, const std::vector<double>& b, double tol = tol::fingerprint);

struct UnifiedTrig {
  double sn;
  double csn;
  double ctn;
};

/// (sin, cos, cot) on S^3 and (sinh, cosh, coth) on H^3.
UnifiedTrig unified_trig(double x, Curvature k);

/// Single pair term F_ij, tangent to the manifold at q_i.
AmbientVector force_pair(const Configuration& config, int i, int j);

/// F_i = grad_{q_i} U for every body.
std::vector<AmbientVector> grad_U(const Configuration& config);

/// Force function U = sum_{i<j} m_i m_j ctn(d_ij).
double potential(const Configuration& config);

/// Manifold gradient of the moment function I, per body.
std::vector<AmbientVector> grad_I(const Configuration& config);

AmbientVector grad_I_body(const AmbientVector& q, double mass, Curvature k);

/// I = sum m_i (x_i^2 + y_i^2).
double moment(const Configuration& config);

struct PhaseState {
  Configuration config;
  std::vector<AmbientVector> velocities;
};

/// Positions valid as for a single body set (N >= 1) and velocities tangent within tol.
void validate(const PhaseState& state, double tol = 1e-9);

/// Accelerations q''_i = F_i / m_i - sigma (q'_i . q'_i) q_i.
std::vector<AmbientVector> eom_rhs(const PhaseState& state);

struct Conserved {
  double energy = 0.0;        // (1/2) sum m_i q'_i.q'_i - U
  double momentum_xy = 0.0;   // sum m_i (x_i y'_i - y_i x'_i)
  double momentum_zw = 0.0;   // sum m_i (z_i w'_i - w_i z'_i)
};

Conserved conserved_quantities(const PhaseState& state);

struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseState> states;
  std::vector<double> energy;
  std::vector<double> momentum_xy;
  std::vector<double> momentum_zw;

  bool aborted = false;
  double abort_time = 0.0;
  std::pair<int, int> singular_pair{-1, -1};
};

/// Fixed-step classical RK4 on eom_rhs, projecting positions back onto the
/// manifold and velocities onto the tangent space after every step.
/// Samples every `record_every` steps plus the final state. A step that hits
/// the singular set ends the run with `aborted` set.
Trajectory integrate(const PhaseState& initial, double dt, double t_end, int record_every = 1);

/// Largest |d_ij(t) - d_ij(0)| over all recorded samples and pairs.
double max_distance_drift(const Trajectory& trajectory);

/// Initial velocities of the relative equilibrium generated by a central
/// configuration with multiplier lambda. Spherical: q' = a(-y,x,0,0) + b(0,0,-w,z)
/// with b^2 - a^2 = 2 lambda, a = s. Hyperbolic: q' = a(-y,x,0,0) + b(0,0,w,z)
/// with a^2 + b^2 = -2 lambda, a = s. Throws Error(infeasible_spin).
std::vector<AmbientVector> relative_equilibrium_velocities(const Configuration& config, double lambda, double s);

}  // namespace curvedcc
