#include <algorithm>
#include <cmath>

#include "curvedcc/kernels.hpp"

namespace curvedcc::kernels::detail {

ForceResult pair_forces_scalar(std::span<const AmbientVector> q, std::span<const double> masses, Curvature k,
                               std::span<AmbientVector> forces) {
  const std::size_t n = q.size();
  const double s = sign(k);
  std::fill(forces.begin(), forces.end(), AmbientVector{});
  ForceResult result;
  for (std::size_t i = 0; i < n; ++i) {
    const AmbientVector& qi = q[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const AmbientVector& qj = q[j];
      const double dot = sdot(qi, qj, k);
      if (is_singular_dot(dot, k)) {
        result.bad_i = static_cast<int>(i);
        result.bad_j = static_cast<int>(j);
        return result;
      }
      // csn = cos d = dot on S^3, cosh d = -dot on H^3.
      const double csn = s * dot;
      const double sn2 = s > 0 ? (1.0 - dot) * (1.0 + dot) : (dot - 1.0) * (dot + 1.0);
      const double sn = std::sqrt(sn2);
      const double mm = masses[i] * masses[j];
      const double coef = mm / (sn2 * sn);
      for (int c = 0; c < 4; ++c) {
        forces[i][c] += coef * (qj[c] - csn * qi[c]);
        forces[j][c] += coef * (qi[c] - csn * qj[c]);
      }
      result.potential += mm * csn / sn;
    }
  }
  return result;
}

void axpy_scalar(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace curvedcc::kernels::detail
