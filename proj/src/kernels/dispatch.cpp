#include <atomic>
#include <cstdlib>
#include <cstring>

#include "bosonize/kernels.hpp"

namespace bosonize::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(BOSONIZE_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("BOSONIZE_ISA"); env != nullptr && std::strcmp(env, "scalar") == 0) {
    return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
  static const bool avx2 = cpu_has_avx2();
  return avx2;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

Isa set_active_isa(Isa isa) {
  if (!isa_available(isa)) isa = Isa::scalar;
  return current().exchange(isa);
}

bool fits_shifted_mask(std::int32_t max_abs_coordinate, const IntVec3& shift) {
  const std::int64_t reach = std::int64_t{max_abs_coordinate} + shift.max_abs();
  // 3 * reach^2 must stay below 2^31.
  return reach < (1 << 14);
}

PoleSums pole_sums(std::span<const double> poles, std::span<const double> weights, double lambda) {
#if defined(BOSONIZE_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::avx2) return avx2::pole_sums(poles, weights, lambda);
#endif
  return scalar::pole_sums(poles, weights, lambda);
}

void abs_projections(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                     const Vec3& direction, std::span<double> out) {
#if defined(BOSONIZE_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::avx2) return avx2::abs_projections(x, y, z, direction, out);
#endif
  scalar::abs_projections(x, y, z, direction, out);
}

void shifted_outside_mask(std::span<const std::int32_t> x, std::span<const std::int32_t> y,
                          std::span<const std::int32_t> z, const IntVec3& shift, std::int64_t radius_squared,
                          std::span<std::uint8_t> mask) {
#if defined(BOSONIZE_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::avx2) return avx2::shifted_outside_mask(x, y, z, shift, radius_squared, mask);
#endif
  scalar::shifted_outside_mask(x, y, z, shift, radius_squared, mask);
}

}  // namespace bosonize::kernels
