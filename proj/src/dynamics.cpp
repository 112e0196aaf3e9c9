#include "curvedcc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "curvedcc/errors.hpp"
#include "curvedcc/kernels.hpp"

namespace curvedcc {

namespace {

void validate_bodies(const Configuration& config, double on_tol, std::size_t min_bodies) {
  const std::size_t n = config.size();
  if (n < min_bodies) throw Error(ErrorCode::invalid_config, "need at least " + std::to_string(min_bodies) + " bodies");
  if (config.masses.size() != n) throw Error(ErrorCode::invalid_config, "masses and positions differ in length");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(config.masses[i] > 0.0) || !std::isfinite(config.masses[i]))
      throw Error(ErrorCode::invalid_config, "mass " + std::to_string(i) + " is not a positive finite number");
    if (!on_manifold(config.positions[i], config.curvature, on_tol))
      throw Error(ErrorCode::invalid_config, "position " + std::to_string(i) + " is not on the manifold");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (is_singular_dot(sdot(config.positions[i], config.positions[j], config.curvature), config.curvature))
        throw SingularPairError(static_cast<int>(i), static_cast<int>(j));
}

// Flat layout used by the integrator: 4N position doubles then 4N velocity doubles.
std::span<AmbientVector> as_vectors(std::span<double> flat) {
  return {reinterpret_cast<AmbientVector*>(flat.data()), flat.size() / 4};
}

}  // namespace

void validate(const Configuration& config, double on_tol) { validate_bodies(config, on_tol, 2); }

Configuration apply_group(const GroupElement& g, const Configuration& config) {
  Configuration out = config;
  for (auto& q : out.positions) q = apply_group(g, q);
  return out;
}

double pair_distance(const Configuration& config, int i, int j) {
  try {
    return geodesic_distance(config.positions[i], config.positions[j], config.curvature);
  } catch (const SingularPairError&) {
    throw SingularPairError(i, j);
  }
}

std::vector<double> pairwise_distances(const Configuration& config) {
  const int n = static_cast<int>(config.size());
  std::vector<double> d;
  d.reserve(n * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d.push_back(pair_distance(config, i, j));
  return d;
}

std::vector<double> fingerprint(const Configuration& config) {
  auto d = pairwise_distances(config);
  std::sort(d.begin(), d.end());
  return d;
}

bool fingerprints_match(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!(std::abs(a[k] - b[k]) <= tol)) return false;
  return true;
}

UnifiedTrig unified_trig(double x, Curvature k) {
  if (k == Curvature::spherical) return {std::sin(x), std::cos(x), std::cos(x) / std::sin(x)};
  return {std::sinh(x), std::cosh(x), 1.0 / std::tanh(x)};
}

AmbientVector force_pair(const Configuration& config, int i, int j) {
  const auto& qi = config.positions[i];
  const auto& qj = config.positions[j];
  const auto trig = unified_trig(pair_distance(config, i, j), config.curvature);
  const double mm = config.masses[i] * config.masses[j];
  return (mm / (trig.sn * trig.sn * trig.sn)) * (qj - trig.csn * qi);
}

std::vector<AmbientVector> grad_U(const Configuration& config) {
  std::vector<AmbientVector> forces(config.size());
  const auto r = kernels::pair_forces(config.positions, config.masses, config.curvature, forces);
  if (!r.ok()) throw SingularPairError(r.bad_i, r.bad_j);
  return forces;
}

double potential(const Configuration& config) {
  std::vector<AmbientVector> forces(config.size());
  const auto r = kernels::pair_forces(config.positions, config.masses, config.curvature, forces);
  if (!r.ok()) throw SingularPairError(r.bad_i, r.bad_j);
  return r.potential;
}

AmbientVector grad_I_body(const AmbientVector& q, double mass, Curvature k) {
  const double r2 = q.x * q.x + q.y * q.y;
  const double two_m = 2.0 * mass;
  if (k == Curvature::spherical) {
    const double zw2 = q.w * q.w + q.z * q.z;
    return {two_m * q.x * zw2, two_m * q.y * zw2, -two_m * q.z * r2, -two_m * q.w * r2};
  }
  const double zw2 = q.w * q.w - q.z * q.z;
  return {two_m * q.x * zw2, two_m * q.y * zw2, two_m * q.z * r2, two_m * q.w * r2};
}

std::vector<AmbientVector> grad_I(const Configuration& config) {
  std::vector<AmbientVector> g(config.size());
  for (std::size_t i = 0; i < config.size(); ++i) g[i] = grad_I_body(config.positions[i], config.masses[i], config.curvature);
  return g;
}

double moment(const Configuration& config) {
  double total = 0.0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    const auto& q = config.positions[i];
    total += config.masses[i] * (q.x * q.x + q.y * q.y);
  }
  return total;
}

void validate(const PhaseState& state, double tol) {
  validate_bodies(state.config, tol::on_manifold, 1);
  if (state.velocities.size() != state.config.size())
    throw Error(ErrorCode::invalid_config, "velocities and positions differ in length");
  for (std::size_t i = 0; i < state.velocities.size(); ++i) {
    const auto& v = state.velocities[i];
    if (!(std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z) && std::isfinite(v.w)))
      throw Error(ErrorCode::invalid_config, "velocity " + std::to_string(i) + " is not finite");
    if (std::abs(sdot(v, state.config.positions[i], state.config.curvature)) > tol)
      throw Error(ErrorCode::invalid_config, "velocity " + std::to_string(i) + " is not tangent to the manifold");
  }
}

namespace {

// Accelerations into `acc`; returns the kernel result so callers can see singular pairs.
kernels::ForceResult accelerations(Curvature k, std::span<const double> masses, std::span<const AmbientVector> q,
                                   std::span<const AmbientVector> v, std::span<AmbientVector> acc) {
  const auto r = kernels::pair_forces(q, masses, k, acc);
  if (!r.ok()) return r;
  const double s = sign(k);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double speed2 = sdot(v[i], v[i], k);
    acc[i] *= 1.0 / masses[i];
    acc[i] -= (s * speed2) * q[i];
  }
  return r;
}

}  // namespace

std::vector<AmbientVector> eom_rhs(const PhaseState& state) {
  std::vector<AmbientVector> acc(state.config.size());
  const auto r = accelerations(state.config.curvature, state.config.masses, state.config.positions, state.velocities, acc);
  if (!r.ok()) throw SingularPairError(r.bad_i, r.bad_j);
  return acc;
}

Conserved conserved_quantities(const PhaseState& state) {
  const auto& cfg = state.config;
  Conserved c;
  double kinetic = 0.0;
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    const auto& q = cfg.positions[i];
    const auto& v = state.velocities[i];
    const double m = cfg.masses[i];
    kinetic += 0.5 * m * sdot(v, v, cfg.curvature);
    c.momentum_xy += m * (q.x * v.y - q.y * v.x);
    c.momentum_zw += m * (q.z * v.w - q.w * v.z);
  }
  c.energy = kinetic - (cfg.size() >= 2 ? potential(cfg) : 0.0);
  return c;
}

Trajectory integrate(const PhaseState& initial, double dt, double t_end, int record_every) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw Error(ErrorCode::invalid_argument, "dt and t_end must be positive");
  if (record_every < 1) throw Error(ErrorCode::invalid_argument, "record_every must be at least 1");
  validate(initial);

  const Curvature k = initial.config.curvature;
  const std::size_t n = initial.config.size();
  const std::size_t half = 4 * n;
  const auto& masses = initial.config.masses;

  std::vector<double> y(2 * half);
  std::copy_n(&initial.config.positions.data()->x, half, y.begin());
  std::copy_n(&initial.velocities.data()->x, half, y.begin() + half);

  std::vector<double> stage(2 * half);
  std::array<std::vector<double>, 4> slopes;
  for (auto& s : slopes) s.resize(2 * half);

  auto derivative = [&](std::span<double> state, std::span<double> out) {
    auto q = as_vectors(state.subspan(0, half));
    auto v = as_vectors(state.subspan(half));
    std::copy_n(state.begin() + half, half, out.begin());
    return accelerations(k, masses, q, v, as_vectors(out.subspan(half)));
  };

  Trajectory traj;
  auto record = [&](double t) {
    PhaseState s{initial.config, {}};
    auto q = as_vectors(std::span(y).subspan(0, half));
    auto v = as_vectors(std::span(y).subspan(half));
    s.config.positions.assign(q.begin(), q.end());
    s.velocities.assign(v.begin(), v.end());
    const auto c = conserved_quantities(s);
    traj.times.push_back(t);
    traj.energy.push_back(c.energy);
    traj.momentum_xy.push_back(c.momentum_xy);
    traj.momentum_zw.push_back(c.momentum_zw);
    traj.states.push_back(std::move(s));
  };
  record(0.0);

  const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  double t = 0.0;
  for (long step = 1; step <= steps; ++step) {
    const double t_next = std::min(static_cast<double>(step) * dt, t_end);
    const double h = t_next - t;

    // Classical RK4: stage_k = y + c_k h slope_{k-1}.
    static constexpr double stage_weight[3] = {0.5, 0.5, 1.0};
    kernels::ForceResult r = derivative(y, slopes[0]);
    for (int s = 1; s < 4 && r.ok(); ++s) {
      std::copy(y.begin(), y.end(), stage.begin());
      kernels::axpy(stage_weight[s - 1] * h, slopes[s - 1], stage);
      r = derivative(stage, slopes[s]);
    }
    if (!r.ok()) {
      traj.aborted = true;
      traj.abort_time = t;
      traj.singular_pair = {r.bad_i, r.bad_j};
      break;
    }
    // Combine the slopes first so y is rounded once per step.
    std::copy(slopes[0].begin(), slopes[0].end(), stage.begin());
    kernels::axpy(1.0, slopes[3], stage);
    kernels::axpy(2.0, slopes[1], stage);
    kernels::axpy(2.0, slopes[2], stage);
    kernels::axpy(h / 6.0, stage, y);

    auto q = as_vectors(std::span(y).subspan(0, half));
    auto v = as_vectors(std::span(y).subspan(half));
    for (std::size_t i = 0; i < n; ++i) {
      const auto projected = normalize_onto(q[i], k);
      if (!projected) {
        traj.aborted = true;
        traj.abort_time = t;
        break;
      }
      q[i] = *projected;
      v[i] = project_tangent(v[i], q[i], k);
    }
    if (traj.aborted) break;
    t = t_next;

    if (n >= 2) {
      // Detect entry into the singular set between samples as well.
      bool singular = false;
      for (std::size_t i = 0; i < n && !singular; ++i)
        for (std::size_t j = i + 1; j < n && !singular; ++j)
          if (is_singular_dot(sdot(q[i], q[j], k), k)) {
            traj.aborted = true;
            traj.abort_time = t;
            traj.singular_pair = {static_cast<int>(i), static_cast<int>(j)};
            singular = true;
          }
      if (singular) break;
    }
    if (step % record_every == 0 || step == steps) record(t);
  }
  return traj;
}

double max_distance_drift(const Trajectory& trajectory) {
  if (trajectory.states.empty() || trajectory.states.front().config.size() < 2) return 0.0;
  const auto d0 = pairwise_distances(trajectory.states.front().config);
  double drift = 0.0;
  for (const auto& s : trajectory.states) {
    const auto d = pairwise_distances(s.config);
    for (std::size_t k = 0; k < d.size(); ++k) drift = std::max(drift, std::abs(d[k] - d0[k]));
  }
  return drift;
}

std::vector<AmbientVector> relative_equilibrium_velocities(const Configuration& config, double lambda, double s) {
  if (!(s >= 0.0)) throw Error(ErrorCode::infeasible_spin, "spin parameter must be non-negative");
  const double alpha = s;
  const bool spherical = config.curvature == Curvature::spherical;
  const double b2 = spherical ? 2.0 * lambda + alpha * alpha : -2.0 * lambda - alpha * alpha;
  // b2 within round-off of zero (e.g. s = sqrt(-2 lambda)) is a pure xy spin.
  const double noise = 8.0 * std::numeric_limits<double>::epsilon() * (2.0 * std::abs(lambda) + alpha * alpha);
  if (!spherical && lambda > 0.0)
    throw Error(ErrorCode::infeasible_spin, "need lambda <= 0 and s <= sqrt(-2 lambda) on H^3");
  if (b2 < -noise)
    throw Error(ErrorCode::infeasible_spin, spherical ? "2 lambda + s^2 < 0 has no real zw spin"
                                                      : "need lambda <= 0 and s <= sqrt(-2 lambda) on H^3");
  const double beta = b2 <= noise ? 0.0 : std::sqrt(b2);

  std::vector<AmbientVector> v(config.size());
  for (std::size_t i = 0; i < config.size(); ++i) {
    const auto& q = config.positions[i];
    const AmbientVector spin_xy{-q.y, q.x, 0.0, 0.0};
    const AmbientVector spin_zw = config.curvature == Curvature::spherical ? AmbientVector{0.0, 0.0, -q.w, q.z}
                                                                             : AmbientVector{0.0, 0.0, q.w, q.z};
    v[i] = alpha * spin_xy + beta * spin_zw;
  }
  return v;
}

}  // namespace curvedcc
