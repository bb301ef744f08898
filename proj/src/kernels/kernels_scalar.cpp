#include <cmath>

#include "bosonize/kernels.hpp"

namespace bosonize::kernels::scalar {

PoleSums pole_sums(std::span<const double> poles, std::span<const double> weights, double lambda) {
  PoleSums s;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const double inv = 1.0 / (poles[i] - lambda);
    const double t = weights[i] * inv;
    s.value += t;
    s.derivative += t * inv;
  }
  return s;
}

void abs_projections(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                     const Vec3& d, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::fabs(x[i] * d.x + y[i] * d.y + z[i] * d.z);
  }
}

void shifted_outside_mask(std::span<const std::int32_t> x, std::span<const std::int32_t> y,
                          std::span<const std::int32_t> z, const IntVec3& s, std::int64_t radius_squared,
                          std::span<std::uint8_t> mask) {
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const std::int64_t px = x[i] + s.x;
    const std::int64_t py = y[i] + s.y;
    const std::int64_t pz = z[i] + s.z;
    mask[i] = (px * px + py * py + pz * pz > radius_squared) ? 1 : 0;
  }
}

}  // namespace bosonize::kernels::scalar
