#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "curvedcc/kernels.hpp"

namespace curvedcc::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

// One AmbientVector per 256-bit register; the w lane carries the metric sign.
ForceResult pair_forces_avx2(std::span<const AmbientVector> q, std::span<const double> masses, Curvature k,
                             std::span<AmbientVector> forces) {
  const std::size_t n = q.size();
  const double s = sign(k);
  const __m256d metric = _mm256_set_pd(s, 1.0, 1.0, 1.0);
  const double* qb = &q.data()->x;
  double* fb = &forces.data()->x;
  std::fill(forces.begin(), forces.end(), AmbientVector{});

  ForceResult result;
  for (std::size_t i = 0; i < n; ++i) {
    const __m256d qi = _mm256_loadu_pd(qb + 4 * i);
    const __m256d qi_signed = _mm256_mul_pd(qi, metric);
    __m256d fi = _mm256_setzero_pd();
    for (std::size_t j = i + 1; j < n; ++j) {
      const __m256d qj = _mm256_loadu_pd(qb + 4 * j);
      const double dot = hsum(_mm256_mul_pd(qi_signed, qj));
      if (is_singular_dot(dot, k)) {
        result.bad_i = static_cast<int>(i);
        result.bad_j = static_cast<int>(j);
        return result;
      }
      const double csn = s * dot;
      const double sn2 = s > 0 ? (1.0 - dot) * (1.0 + dot) : (dot - 1.0) * (dot + 1.0);
      const double sn = std::sqrt(sn2);
      const double mm = masses[i] * masses[j];
      const __m256d coef = _mm256_set1_pd(mm / (sn2 * sn));
      const __m256d vcsn = _mm256_set1_pd(csn);

      fi = _mm256_fmadd_pd(coef, _mm256_fnmadd_pd(vcsn, qi, qj), fi);
      __m256d fj = _mm256_loadu_pd(fb + 4 * j);
      fj = _mm256_fmadd_pd(coef, _mm256_fnmadd_pd(vcsn, qj, qi), fj);
      _mm256_storeu_pd(fb + 4 * j, fj);

      result.potential += mm * csn / sn;
    }
    _mm256_storeu_pd(fb + 4 * i, _mm256_add_pd(_mm256_loadu_pd(fb + 4 * i), fi));
  }
  return result;
}

void axpy_avx2(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y.data() + i);
    _mm256_storeu_pd(y.data() + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x.data() + i), vy));
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

}  // namespace curvedcc::kernels::detail
