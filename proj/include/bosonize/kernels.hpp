#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// on x86-64, an AVX2+FMA version; the free functions in `bosonize::kernels`
// dispatch at runtime. Tests check the variants against each other.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "bosonize/vec3.hpp"

namespace bosonize::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

// True when the ISA was compiled in and the running CPU supports it.
bool isa_available(Isa isa);

// The ISA used by the dispatching entry points. Defaults to the best available
// one; the environment variable BOSONIZE_ISA=scalar forces the reference path.
Isa active_isa();

// Overrides the dispatch choice; falls back to scalar if `isa` is unavailable.
// Returns the previous setting.
Isa set_active_isa(Isa isa);

// Sums of a rational function over poles p_i with weights w_i:
//   value      = sum_i w_i / (p_i - lambda)
//   derivative = sum_i w_i / (p_i - lambda)^2     (d value / d lambda)
struct PoleSums {
  double value = 0.0;
  double derivative = 0.0;
};

// ---------------------------------------------------------------------------
// Dispatching entry points
// ---------------------------------------------------------------------------

PoleSums pole_sums(std::span<const double> poles, std::span<const double> weights, double lambda);

// out_i = |x_i * d.x + y_i * d.y + z_i * d.z|
void abs_projections(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                     const Vec3& direction, std::span<double> out);

// mask_i = 1 if |(x_i, y_i, z_i) + shift|^2 > radius_squared, else 0.
// Coordinates and the shift must satisfy |component| < 2^14 so that squared
// norms fit in 32 bits; callers check `fits_shifted_mask`.
void shifted_outside_mask(std::span<const std::int32_t> x, std::span<const std::int32_t> y,
                          std::span<const std::int32_t> z, const IntVec3& shift, std::int64_t radius_squared,
                          std::span<std::uint8_t> mask);

bool fits_shifted_mask(std::int32_t max_abs_coordinate, const IntVec3& shift);

// ---------------------------------------------------------------------------
// Explicit variants, exposed for equivalence testing.
// ---------------------------------------------------------------------------

namespace scalar {
PoleSums pole_sums(std::span<const double> poles, std::span<const double> weights, double lambda);
void abs_projections(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                     const Vec3& direction, std::span<double> out);
void shifted_outside_mask(std::span<const std::int32_t> x, std::span<const std::int32_t> y,
                          std::span<const std::int32_t> z, const IntVec3& shift, std::int64_t radius_squared,
                          std::span<std::uint8_t> mask);
}  // namespace scalar

#if defined(BOSONIZE_HAVE_AVX2_KERNELS)
namespace avx2 {
PoleSums pole_sums(std::span<const double> poles, std::span<const double> weights, double lambda);
void abs_projections(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                     const Vec3& direction, std::span<double> out);
void shifted_outside_mask(std::span<const std::int32_t> x, std::span<const std::int32_t> y,
                          std::span<const std::int32_t> z, const IntVec3& shift, std::int64_t radius_squared,
                          std::span<std::uint8_t> mask);
}  // namespace avx2
#endif

}  // namespace bosonize::kernels
