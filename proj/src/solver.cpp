#include "curvedcc/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "curvedcc/catalog.hpp"
#include "curvedcc/kernels.hpp"

namespace curvedcc {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::no_convergence: return "no_convergence";
    case SolveStatus::singular_pair: return "singular_pair";
  }
  return "unknown";
}

Configuration random_configuration(Curvature k, std::span<const double> masses, std::mt19937_64& rng,
                                   double min_distance) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Configuration cfg;
  cfg.curvature = k;
  cfg.masses.assign(masses.begin(), masses.end());
  cfg.positions.resize(masses.size());
  for (;;) {
    for (auto& q : cfg.positions) {
      if (k == Curvature::spherical) {
        AmbientVector g;
        double norm = 0.0;
        do {
          g = {normal(rng), normal(rng), normal(rng), normal(rng)};
          norm = enorm(g);
        } while (norm < 1e-8);
        q = (1.0 / norm) * g;
      } else {
        q.x = normal(rng);
        q.y = normal(rng);
        q.z = normal(rng);
        q.w = std::sqrt(1.0 + q.x * q.x + q.y * q.y + q.z * q.z);
      }
    }
    bool separated = true;
    for (std::size_t i = 0; i < cfg.size() && separated; ++i)
      for (std::size_t j = i + 1; j < cfg.size() && separated; ++j) {
        const double dot = sdot(cfg.positions[i], cfg.positions[j], k);
        if (is_singular_dot(dot, k) || geodesic_distance(cfg.positions[i], cfg.positions[j], k) < min_distance)
          separated = false;
      }
    if (separated) return cfg;
  }
}

namespace {

using Eigen::VectorXd;

enum class EvalStatus { ok, singular, off_domain };

// Stacked residual over p = (q_1, ..., q_N, lambda).
class CCSystem {
 public:
  CCSystem(Curvature k, const std::vector<double>& masses)
      : k_(k), masses_(masses), n_(masses.size()), hat_(n_), forces_(n_) {}

  Eigen::Index unknowns() const { return static_cast<Eigen::Index>(4 * n_ + 1); }
  Eigen::Index residuals() const { return static_cast<Eigen::Index>(5 * n_); }

  EvalStatus eval(const VectorXd& p, VectorXd& r) {
    r.resize(residuals());
    const double s = sign(k_);
    for (std::size_t i = 0; i < n_; ++i) {
      const AmbientVector raw{p(4 * i), p(4 * i + 1), p(4 * i + 2), p(4 * i + 3)};
      const auto hat = normalize_onto(raw, k_);
      if (!hat) return EvalStatus::off_domain;
      hat_[i] = *hat;
      r(static_cast<Eigen::Index>(4 * n_ + i)) = sdot(raw, raw, k_) - s;
    }
    const auto fr = kernels::pair_forces(hat_, masses_, k_, forces_);
    if (!fr.ok()) return EvalStatus::singular;
    const double lambda = p(static_cast<Eigen::Index>(4 * n_));
    for (std::size_t i = 0; i < n_; ++i) {
      const auto res = forces_[i] - lambda * grad_I_body(hat_[i], masses_[i], k_);
      for (int c = 0; c < 4; ++c) r(static_cast<Eigen::Index>(4 * i + c)) = res[c];
    }
    return EvalStatus::ok;
  }

  // Central differences; one-sided where a probe leaves the domain.
  void jacobian(const VectorXd& p, const VectorXd& r0, double step, Eigen::MatrixXd& jac) {
    jac.setZero(residuals(), unknowns());
    VectorXd probe = p;
    VectorXd rp;
    VectorXd rm;
    for (Eigen::Index col = 0; col < unknowns(); ++col) {
      const double h = step * std::max(1.0, std::abs(p(col)));
      probe(col) = p(col) + h;
      const bool plus = eval(probe, rp) == EvalStatus::ok;
      probe(col) = p(col) - h;
      const bool minus = eval(probe, rm) == EvalStatus::ok;
      probe(col) = p(col);
      if (plus && minus)
        jac.col(col) = (rp - rm) / (2.0 * h);
      else if (plus)
        jac.col(col) = (rp - r0) / h;
      else if (minus)
        jac.col(col) = (r0 - rm) / h;
    }
  }

  double cc_residual_inf(const VectorXd& r) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) worst = std::max(worst, r.segment(static_cast<Eigen::Index>(4 * i), 4).norm());
    return worst;
  }

 private:
  Curvature k_;
  const std::vector<double>& masses_;
  std::size_t n_;
  std::vector<AmbientVector> hat_;
  std::vector<AmbientVector> forces_;
};

// Diagonal of the normal matrix with each body's four entries replaced by
// their mean. The block trace is unchanged by rotations of that body, so
// damping with it keeps the iteration equivariant.
VectorXd invariant_diagonal(const Eigen::MatrixXd& normal, std::size_t n) {
  VectorXd d = normal.diagonal();
  for (std::size_t i = 0; i < n; ++i) d.segment(static_cast<Eigen::Index>(4 * i), 4).setConstant(d.segment(static_cast<Eigen::Index>(4 * i), 4).mean());
  return d;
}

Configuration unpack(Curvature k, const std::vector<double>& masses, const VectorXd& p) {
  Configuration cfg;
  cfg.curvature = k;
  cfg.masses = masses;
  cfg.positions.resize(masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i) {
    const AmbientVector raw{p(4 * i), p(4 * i + 1), p(4 * i + 2), p(4 * i + 3)};
    cfg.positions[i] = normalize_onto(raw, k).value_or(raw);
  }
  return cfg;
}

}  // namespace

SolveOutcome find_cc(Curvature k, std::vector<double> masses, const std::optional<Configuration>& init,
                     const SolveOptions& opts) {
  if (masses.size() < 2) throw Error(ErrorCode::invalid_argument, "need at least two masses");
  for (double m : masses)
    if (!(m > 0.0) || !std::isfinite(m)) throw Error(ErrorCode::invalid_argument, "masses must be positive");
  if (opts.max_iter < 1 || !(opts.step_tol > 0.0) || !(opts.residual_tol > 0.0))
    throw Error(ErrorCode::invalid_argument, "max_iter >= 1 and positive tolerances required");

  Configuration start;
  if (init) {
    start = *init;
    if (start.curvature != k || start.size() != masses.size())
      throw Error(ErrorCode::invalid_argument, "initial configuration does not match curvature or body count");
    start.masses = masses;
    validate(start);
  } else {
    std::mt19937_64 rng(opts.seed);
    start = random_configuration(k, masses, rng, opts.min_init_distance);
  }

  const std::size_t n = masses.size();
  CCSystem system(k, masses);
  VectorXd p(system.unknowns());
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < 4; ++c) p(static_cast<Eigen::Index>(4 * i + c)) = start.positions[i][c];
  p(static_cast<Eigen::Index>(4 * n)) = opts.lambda_init ? *opts.lambda_init : fit_lambda(start).lambda;

  SolveOutcome out;
  VectorXd r;
  if (system.eval(p, r) != EvalStatus::ok) throw Error(ErrorCode::invalid_argument, "initial configuration is singular");
  double cost = 0.5 * r.squaredNorm();

  Eigen::MatrixXd jac;
  system.jacobian(p, r, opts.fd_step, jac);
  Eigen::MatrixXd normal = jac.transpose() * jac;
  VectorXd gradient = jac.transpose() * r;
  double mu = opts.damping_init * std::max(invariant_diagonal(normal, n).maxCoeff(), 1.0);
  double nu = 2.0;
  int singular_rejections = 0;

  // Stop iterating well below the acceptance threshold so the final
  // renormalization and lambda refit do not push the residual back over it.
  const double target = 1e-3 * opts.residual_tol;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    const double constraint = r.tail(static_cast<Eigen::Index>(n)).cwiseAbs().maxCoeff();
    if (system.cc_residual_inf(r) < target && constraint < 1e-13) break;

    // Marquardt scaling damps each body relative to its own curvature;
    // spread-out H^3 iterates are badly scaled without it.
    const VectorXd scale = opts.marquardt_scaling ? invariant_diagonal(normal, n).cwiseMax(1e-12).eval()
                                                  : VectorXd::Ones(normal.rows()).eval();
    Eigen::MatrixXd damped = normal;
    damped.diagonal() += mu * scale;
    const VectorXd delta = damped.ldlt().solve(-gradient);
    if (delta.norm() < opts.step_tol * (p.norm() + opts.step_tol)) break;

    const VectorXd trial = p + delta;
    VectorXd r_trial;
    const EvalStatus status = system.eval(trial, r_trial);
    if (status != EvalStatus::ok) {
      if (++singular_rejections > opts.max_singular_retries) {
        out.status = SolveStatus::singular_pair;
        break;
      }
      mu *= nu;
      nu *= 2.0;
      continue;
    }
    singular_rejections = 0;

    const double trial_cost = 0.5 * r_trial.squaredNorm();
    const double predicted = 0.5 * delta.dot(mu * scale.cwiseProduct(delta) - gradient);
    const double gain = predicted > 0.0 ? (cost - trial_cost) / predicted : -1.0;
    if (gain > 0.0) {
      p = trial;
      r = r_trial;
      cost = trial_cost;
      system.jacobian(p, r, opts.fd_step, jac);
      normal = jac.transpose() * jac;
      gradient = jac.transpose() * r;
      mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * gain - 1.0, 3));
      nu = 2.0;
    } else {
      mu *= nu;
      nu *= 2.0;
    }
    if (!(mu < 1e40)) break;
  }
  out.iterations = iter;

  out.config = unpack(k, masses, p);
  try {
    validate(out.config);
    const auto fit = fit_lambda(out.config);
    out.report = analyze(out.config, fit.lambda, opts.tolerances);
    out.fingerprint = fingerprint(out.config);
    out.converged = out.status != SolveStatus::singular_pair && out.report.residual_inf < opts.residual_tol;
  } catch (const Error&) {
    out.converged = false;
    out.status = SolveStatus::singular_pair;
  }
  if (out.converged)
    out.status = SolveStatus::converged;
  else if (out.status == SolveStatus::converged)
    out.status = SolveStatus::no_convergence;
  return out;
}

Configuration canonical_gauge(const Configuration& config, double rho_tol, double coplanar_tol) {
  double r_max = 0.0;
  for (const auto& q : config.positions) r_max = std::max(r_max, std::hypot(q.x, q.y));
  if (r_max < rho_tol) throw Error(ErrorCode::gauge_degenerate, "every body lies on the zw-plane");

  std::size_t lead = 0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (std::hypot(config.positions[i].x, config.positions[i].y) >= r_max * (1.0 - 1e-9)) {
      lead = i;
      break;
    }
  }
  const auto& q = config.positions[lead];
  Configuration out = apply_group(GroupElement{-std::atan2(q.y, q.x), 0.0, config.curvature}, config);
  out.positions[lead].y = 0.0;

  if (config.curvature == Curvature::hyperbolic && common_phi(out, coplanar_tol, rho_tol)) {
    out = normalize_to_h2xyw(out, coplanar_tol).first;
  }
  return out;
}

std::vector<SpecialCurvePoint> special_curve(std::span<const double> c_grid) {
  constexpr int samples = 64;
  std::vector<SpecialCurvePoint> out;
  out.reserve(c_grid.size());
  for (double c : c_grid) {
    SpecialCurvePoint point;
    point.c = c;
    if (!(c > -1.0 && c < 1.0) || c == 0.0) {
      point.error = ErrorCode::region_invalid;
      out.push_back(point);
      continue;
    }
    // Valid theta interval is (0, pi/2) for c < 0 and (pi/2, pi) for c > 0.
    const double t0 = c < 0.0 ? 0.0 : std::numbers::pi / 2;
    const double width = std::numbers::pi / 2;
    auto lambda = [c](double t) { return catalog::lambda_single_formula(c, t); };

    double prev_t = t0 + width / (samples + 1);
    double prev_v = lambda(prev_t);
    for (int s = 2; s <= samples; ++s) {
      const double t = t0 + width * s / (samples + 1);
      const double v = lambda(t);
      if ((prev_v > 0.0) != (v > 0.0)) {
        double lo = prev_t;
        double hi = t;
        double f_lo = prev_v;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          const double f_mid = lambda(mid);
          if (f_mid == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
          } else {
            hi = mid;
          }
        }
        const double root = std::abs(lambda(lo)) <= std::abs(lambda(hi)) ? lo : hi;
        point.roots.push_back(root);
        const auto forces = grad_U(catalog::family_q(c, root));
        double worst = 0.0;
        for (const auto& f : forces) worst = std::max(worst, enorm(f));
        point.max_force.push_back(worst);
      }
      prev_t = t;
      prev_v = v;
    }
    if (point.roots.empty()) point.error = ErrorCode::no_sign_change;
    out.push_back(std::move(point));
  }
  return out;
}

}  // namespace curvedcc
