#include "curvedcc/ccstat.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "curvedcc/errors.hpp"

namespace curvedcc {

const char* to_string(DimClass d) {
  switch (d) {
    case DimClass::geodesic: return "geodesic";
    case DimClass::two_dimensional: return "2d";
    case DimClass::three_dimensional: return "3d";
  }
  return "unknown";
}

LambdaFit fit_lambda(const Configuration& config) {
  const auto forces = grad_U(config);
  const auto gi = grad_I(config);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    num += edot(forces[i], gi[i]);
    den += edot(gi[i], gi[i]);
  }
  if (den < tol::fit_denominator) return {0.0, true};
  return {num / den, false};
}

CCReport cc_residual(const Configuration& config, double lambda, const CCTolerances& tols) {
  const auto forces = grad_U(config);
  CCReport report;
  report.lambda = lambda;
  report.residual_per_body.resize(config.size());
  for (std::size_t i = 0; i < config.size(); ++i) {
    const auto gi = grad_I_body(config.positions[i], config.masses[i], config.curvature);
    report.residual_per_body[i] = enorm(forces[i] - lambda * gi);
    report.residual_inf = std::max(report.residual_inf, report.residual_per_body[i]);
  }
  report.is_special = std::abs(lambda) < tols.lambda && report.residual_inf < tols.cc;
  return report;
}

DimClass classify_dimension(const Configuration& config, double rank_tol) {
  Eigen::MatrixXd positions(4, static_cast<Eigen::Index>(config.size()));
  for (std::size_t i = 0; i < config.size(); ++i)
    for (int c = 0; c < 4; ++c) positions(c, static_cast<Eigen::Index>(i)) = config.positions[i][c];
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(positions);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > rank_tol * sv(0)) ++rank;
  switch (rank) {
    case 2: return DimClass::geodesic;
    case 3: return DimClass::two_dimensional;
    case 4: return DimClass::three_dimensional;
    default: throw Error(ErrorCode::degenerate_config, "position matrix has rank " + std::to_string(rank));
  }
}

NecessarySums necessary_sums(const Configuration& config, double rho_tol) {
  const auto n = config.size();
  const Curvature k = config.curvature;
  std::vector<PolarZW> polar(n);
  for (std::size_t i = 0; i < n; ++i) polar[i] = polar_zw(config.positions[i], k, rho_tol);

  NecessarySums sums;
  sums.values.assign(n, 0.0);
  sums.defined.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (!polar[i].defined) continue;
    sums.defined[i] = true;
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !polar[j].defined) continue;
      const double sn_d = unified_trig(pair_distance(config, static_cast<int>(i), static_cast<int>(j)), k).sn;
      const double dphi = polar[j].phi - polar[i].phi;
      const double sn_phi = k == Curvature::spherical ? std::sin(dphi) : std::sinh(dphi);
      total += config.masses[i] * config.masses[j] * polar[j].rho * sn_phi / (sn_d * sn_d * sn_d);
    }
    sums.values[i] = total;
  }
  return sums;
}

namespace {

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::remainder(a, two_pi);
  return a <= -std::numbers::pi ? a + two_pi : a;
}

}  // namespace

std::optional<double> common_phi(const Configuration& config, double tol, double rho_tol) {
  const Curvature k = config.curvature;
  std::vector<PolarZW> polar;
  for (const auto& q : config.positions) {
    auto p = polar_zw(q, k, rho_tol);
    if (p.defined) polar.push_back(p);
  }
  if (polar.empty()) return std::nullopt;

  // Angles on S^3 are compared as offsets from the first one so the mean does
  // not straddle the branch cut.
  const double ref = k == Curvature::spherical ? polar.front().phi : 0.0;
  auto offset = [&](double phi) { return k == Curvature::spherical ? wrap_angle(phi - ref) : phi; };

  double weighted = 0.0;
  double weight = 0.0;
  for (const auto& p : polar) {
    weighted += p.rho * offset(p.phi);
    weight += p.rho;
  }
  const double mean = weighted / weight;
  for (const auto& p : polar)
    if (!(std::abs(offset(p.phi) - mean) < tol)) return std::nullopt;
  return k == Curvature::spherical ? wrap_angle(ref + mean) : mean;
}

std::pair<Configuration, GroupElement> normalize_to_h2xyw(const Configuration& config, double tol) {
  if (config.curvature != Curvature::hyperbolic)
    throw Error(ErrorCode::invalid_argument, "normalization onto H^2_xyw needs a hyperbolic configuration");
  const auto phi = common_phi(config, tol);
  if (!phi) throw Error(ErrorCode::not_coplanar, "bodies do not share a common rapidity");
  const GroupElement g{0.0, *phi, Curvature::hyperbolic};
  return {apply_group(g, config), g};
}

CCReport analyze(const Configuration& config, std::optional<double> lambda, const CCTolerances& tols) {
  const double lam = lambda ? *lambda : fit_lambda(config).lambda;
  CCReport report = cc_residual(config, lam, tols);
  try {
    report.dim_class = classify_dimension(config, tols.rank);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::degenerate_config) throw;
  }
  report.common_phi = common_phi(config, tols.coplanar, tols.rho);
  return report;
}

}  // namespace curvedcc
