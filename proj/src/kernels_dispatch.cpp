#include <atomic>

#include "curvedcc/errors.hpp"
#include "curvedcc/kernels.hpp"

namespace curvedcc::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar, &detail::pair_forces_scalar, &detail::axpy_scalar};
#ifdef CURVEDCC_HAVE_AVX2
constexpr KernelTable kAvx2{Isa::avx2, &detail::pair_forces_avx2, &detail::axpy_avx2};
#endif

bool cpu_has_avx2() noexcept {
#if defined(CURVEDCC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() noexcept {
#ifdef CURVEDCC_HAVE_AVX2
  if (cpu_has_avx2()) return &kAvx2;
#endif
  return &kScalar;
}

std::atomic<const KernelTable*>& active() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const char* to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
  }
  return false;
}

Isa best_isa() noexcept { return initial_table()->isa; }

const KernelTable& table_for(Isa isa) {
  if (!isa_supported(isa)) throw Error(ErrorCode::invalid_argument, std::string("kernel variant not available: ") + to_string(isa));
#ifdef CURVEDCC_HAVE_AVX2
  if (isa == Isa::avx2) return kAvx2;
#endif
  return kScalar;
}

Isa active_isa() noexcept { return active().load(std::memory_order_acquire)->isa; }

void set_active_isa(Isa isa) { active().store(&table_for(isa), std::memory_order_release); }

ForceResult pair_forces(std::span<const AmbientVector> q, std::span<const double> masses, Curvature k,
                        std::span<AmbientVector> forces) {
  return active().load(std::memory_order_acquire)->pair_forces(q, masses, k, forces);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().load(std::memory_order_acquire)->axpy(a, x, y);
}

}  // namespace curvedcc::kernels
