#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "curvedcc/dynamics.hpp"

namespace curvedcc {

enum class DimClass { geodesic, two_dimensional, three_dimensional };

/// "geodesic", "2d", "3d".
const char* to_string(DimClass d);

struct CCTolerances {
  double lambda = tol::lambda;
  double cc = tol::cc;
  double rank = tol::rank;
  double coplanar = tol::coplanar;
  double rho = tol::rho;
};

struct CCReport {
  double lambda = 0.0;
  double residual_inf = 0.0;
  std::vector<double> residual_per_body;
  bool is_special = false;
  std::optional<DimClass> dim_class;
  std::optional<double> common_phi;
};

struct LambdaFit {
  double lambda = 0.0;
  bool degenerate = false;
};

/// Least-squares multiplier for grad U = lambda grad I over the stacked
/// 4N ambient components (Euclidean inner product, both curvatures).
LambdaFit fit_lambda(const Configuration& config);

/// Per-body Euclidean norms of F_i - lambda grad_{q_i} I. dim_class and
/// common_phi are left empty; see analyze().
CCReport cc_residual(const Configuration& config, double lambda, const CCTolerances& tols = {});

/// Rank of the 4xN position matrix: 2 geodesic, 3 two-dimensional, 4 three-dimensional.
/// Throws Error(degenerate_config) for rank <= 1.
DimClass classify_dimension(const Configuration& config, double rank_tol = tol::rank);

struct NecessarySums {
  std::vector<double> values;
  std::vector<bool> defined;
};

/// value_i = sum_{j != i} m_i m_j rho_j sn(phi_j - phi_i) / sn^3(d_ij), the
/// component of the CC equation along the zw-direction normal to body i's
/// 2-sphere. Undefined (and zero) where phi_i is undefined.
NecessarySums necessary_sums(const Configuration& config, double rho_tol = tol::rho);

/// rho-weighted mean of the zw-angles/rapidities when every defined one is
/// within tol of it; nullopt otherwise.
std::optional<double> common_phi(const Configuration& config, double tol = tol::coplanar, double rho_tol = tol::rho);

/// Boosts an H^3 configuration lying on one hyperbolic 2-sphere H^2_phi onto
/// the z = 0 slice. Throws Error(not_coplanar) when no common phi exists.
std::pair<Configuration, GroupElement> normalize_to_h2xyw(const Configuration& config, double tol = tol::coplanar);

/// Fitted lambda, residuals, classification and common phi in one report.
CCReport analyze(const Configuration& config, std::optional<double> lambda = std::nullopt, const CCTolerances& tols = {});

}  // namespace curvedcc
