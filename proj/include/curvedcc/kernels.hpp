#pragma once

#include <span>

#include "curvedcc/manifold.hpp"

// Arithmetic inner loops with a scalar reference implementation and SIMD
// variants. The variant is chosen once at startup from the host CPU and can
// be overridden (tests force each variant to check equivalence).
namespace curvedcc::kernels {

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa);

struct ForceResult {
  double potential = 0.0;
  // First singular pair encountered; forces are unspecified when set.
  int bad_i = -1;
  int bad_j = -1;

  bool ok() const noexcept { return bad_i < 0; }
};

using PairForcesFn = ForceResult (*)(std::span<const AmbientVector> q, std::span<const double> masses,
                                     Curvature k, std::span<AmbientVector> forces);
using AxpyFn = void (*)(double a, std::span<const double> x, std::span<double> y);

struct KernelTable {
  Isa isa;
  PairForcesFn pair_forces;
  AxpyFn axpy;
};

bool isa_supported(Isa isa) noexcept;
Isa best_isa() noexcept;

/// Kernel table for a specific variant. Throws Error(invalid_argument) when
/// the variant was not compiled in or the CPU lacks it.
const KernelTable& table_for(Isa isa);

Isa active_isa() noexcept;
void set_active_isa(Isa isa);

/// F_i = sum_{j != i} m_i m_j (q_j - csn(d_ij) q_i) / sn^3(d_ij), and the force
/// function U = sum_{i<j} m_i m_j ctn(d_ij), in one pass over the pairs.
ForceResult pair_forces(std::span<const AmbientVector> q, std::span<const double> masses, Curvature k,
                        std::span<AmbientVector> forces);

/// y += a x
void axpy(double a, std::span<const double> x, std::span<double> y);

/// Restores the previously active variant on destruction.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa) : previous_(active_isa()) { set_active_isa(isa); }
  ~ScopedIsa() { set_active_isa(previous_); }
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

namespace detail {
ForceResult pair_forces_scalar(std::span<const AmbientVector> q, std::span<const double> masses, Curvature k,
                               std::span<AmbientVector> forces);
void axpy_scalar(double a, std::span<const double> x, std::span<double> y);
#ifdef CURVEDCC_HAVE_AVX2
ForceResult pair_forces_avx2(std::span<const AmbientVector> q, std::span<const double> masses, Curvature k,
                             std::span<AmbientVector> forces);
void axpy_avx2(double a, std::span<const double> x, std::span<double> y);
#endif
}  // namespace detail

}  // namespace curvedcc::kernels
