#include <cmath>
#include <random>
#include <vector>

#include "curvedcc/catalog.hpp"
#include "curvedcc/errors.hpp"
#include "curvedcc/kernels.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace curvedcc;
namespace kn = curvedcc::kernels;

namespace {

// Direct double loop over force_pair, independent of the kernels.
std::vector<AmbientVector> reference_forces(const Configuration& cfg) {
  std::vector<AmbientVector> f(cfg.size());
  for (std::size_t i = 0; i < cfg.size(); ++i)
    for (std::size_t j = 0; j < cfg.size(); ++j)
      if (i != j) f[i] += force_pair(cfg, static_cast<int>(i), static_cast<int>(j));
  return f;
}

double reference_potential(const Configuration& cfg) {
  double u = 0.0;
  for (std::size_t i = 0; i < cfg.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.size(); ++j)
      u += cfg.masses[i] * cfg.masses[j] * unified_trig(pair_distance(cfg, int(i), int(j)), cfg.curvature).ctn;
  return u;
}

std::vector<kn::Isa> available() {
  std::vector<kn::Isa> out{kn::Isa::scalar};
  if (kn::isa_supported(kn::Isa::avx2)) out.push_back(kn::Isa::avx2);
  return out;
}

}  // namespace

TEST_CASE("scalar kernel is always available and dispatch picks a supported variant") {
  CHECK(kn::isa_supported(kn::Isa::scalar));
  CHECK(kn::isa_supported(kn::best_isa()));
  CHECK(kn::table_for(kn::Isa::scalar).isa == kn::Isa::scalar);
  if (!kn::isa_supported(kn::Isa::avx2)) CHECK_THROWS_AS(kn::table_for(kn::Isa::avx2), Error);
  MESSAGE("active kernel: " << kn::to_string(kn::active_isa()));
}

TEST_CASE("pair_forces variants agree with the double-loop oracle") {
  std::mt19937_64 rng(11);
  for (auto k : {Curvature::spherical, Curvature::hyperbolic})
    for (int n : {2, 3, 5, 8, 13}) {
      const auto cfg = oracle::random_config(k, n, rng);
      const auto ref = reference_forces(cfg);
      const double u_ref = reference_potential(cfg);
      const double scale = 1.0 + oracle::max_norm(ref);
      std::vector<std::vector<AmbientVector>> results;
      for (auto isa : available()) {
        std::vector<AmbientVector> f(cfg.size());
        const auto r = kn::table_for(isa).pair_forces(cfg.positions, cfg.masses, k, f);
        REQUIRE(r.ok());
        CHECK(std::abs(r.potential - u_ref) < 1e-12 * (1.0 + std::abs(u_ref)));
        for (std::size_t i = 0; i < f.size(); ++i)
          for (int c = 0; c < 4; ++c) CHECK(std::abs(f[i][c] - ref[i][c]) < 1e-12 * scale);
        results.push_back(f);
      }
      for (std::size_t v = 1; v < results.size(); ++v)
        for (std::size_t i = 0; i < cfg.size(); ++i)
          for (int c = 0; c < 4; ++c) CHECK(std::abs(results[v][i][c] - results[0][i][c]) < 1e-13 * scale);
    }
}

TEST_CASE("pair_forces reports the first singular pair in every variant") {
  auto cfg = catalog::pentatope();
  cfg.positions[3] = cfg.positions[1];
  for (auto isa : available()) {
    std::vector<AmbientVector> f(cfg.size());
    const auto r = kn::table_for(isa).pair_forces(cfg.positions, cfg.masses, cfg.curvature, f);
    CHECK_FALSE(r.ok());
    CHECK(r.bad_i == 1);
    CHECK(r.bad_j == 3);
  }
}

TEST_CASE("axpy variants agree, including ragged tails") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 20u, 41u}) {
    std::vector<double> x(n), y0(n);
    for (auto& v : x) v = g(rng);
    for (auto& v : y0) v = g(rng);
    const double a = g(rng);
    for (auto isa : available()) {
      auto y = y0;
      kn::table_for(isa).axpy(a, x, y);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y[i] - (y0[i] + a * x[i])) <= 1e-15 * (1.0 + std::abs(y[i])));
    }
  }
}

TEST_CASE("ScopedIsa switches and restores the active variant") {
  const auto before = kn::active_isa();
  {
    kn::ScopedIsa guard(kn::Isa::scalar);
    CHECK(kn::active_isa() == kn::Isa::scalar);
    const auto p = catalog::pentatope();
    CHECK(potential(p) == doctest::Approx(oracle::pentatope_potential).epsilon(1e-14));
  }
  CHECK(kn::active_isa() == before);
}
