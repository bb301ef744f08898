#include "bosonize/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bosonize/constants.hpp"
#include "bosonize/errors.hpp"
#include "bosonize/kernels.hpp"

namespace bosonize {

namespace {

std::int32_t floor_sqrt(std::int64_t m) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(m)));
  while (r * r > m) --r;
  while ((r + 1) * (r + 1) <= m) ++r;
  return static_cast<std::int32_t>(r);
}

}  // namespace

std::vector<std::int64_t> shell_counts(std::int64_t max_norm2) {
  if (max_norm2 < 0) throw InvalidArgument("shell_counts: negative squared norm");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(max_norm2) + 1, 0);
  const std::int32_t c = floor_sqrt(max_norm2);
  for (std::int32_t x = -c; x <= c; ++x) {
    for (std::int32_t y = -c; y <= c; ++y) {
      const std::int64_t xy = std::int64_t{x} * x + std::int64_t{y} * y;
      if (xy > max_norm2) continue;
      for (std::int32_t z = -c; z <= c; ++z) {
        const std::int64_t n2 = xy + std::int64_t{z} * z;
        if (n2 <= max_norm2) ++counts[static_cast<std::size_t>(n2)];
      }
    }
  }
  return counts;
}

FermiBall build_fermi_ball_squared(std::int64_t radius_squared) {
  if (radius_squared < 0) throw InvalidArgument("build_fermi_ball: negative squared radius");
  FermiBall ball;
  ball.radius_squared = radius_squared;
  ball.k_fermi = std::sqrt(static_cast<double>(radius_squared));

  const std::int32_t c = floor_sqrt(radius_squared);
  for (std::int32_t x = -c; x <= c; ++x) {
    for (std::int32_t y = -c; y <= c; ++y) {
      for (std::int32_t z = -c; z <= c; ++z) {
        const IntVec3 k{x, y, z};
        if (k.norm2() <= radius_squared) ball.momenta.push_back(k);
      }
    }
  }
  std::sort(ball.momenta.begin(), ball.momenta.end(), [](const IntVec3& a, const IntVec3& b) {
    const auto na = a.norm2();
    const auto nb = b.norm2();
    return na != nb ? na < nb : a < b;
  });
  ball.n_particles = static_cast<std::int64_t>(ball.momenta.size());
  ball.kappa = kKappa;
  ball.hbar = hbar_for(static_cast<double>(ball.n_particles));
  return ball;
}

FermiBall build_fermi_ball(const BallSpec& spec) {
  if (spec.kind == BallSpec::Kind::radius) {
    if (!(spec.radius >= 0.0) || !std::isfinite(spec.radius)) {
      throw InvalidArgument("build_fermi_ball: radius must be a non-negative finite number");
    }
    const double r2 = spec.radius * spec.radius;
    const auto m = static_cast<std::int64_t>(std::floor(r2 * (1.0 + 1e-12)));
    FermiBall ball = build_fermi_ball_squared(m);
    ball.k_fermi = spec.radius;
    return ball;
  }

  if (spec.particles < 1) throw InvalidArgument("build_fermi_ball: target particle count must be >= 1");
  const double target = static_cast<double>(spec.particles);
  auto guess = static_cast<std::int64_t>(std::ceil(std::pow(3.0 * target / (4.0 * std::numbers::pi), 2.0 / 3.0))) + 4;
  for (;;) {
    const auto counts = shell_counts(guess);
    std::int64_t cumulative = 0;
    for (std::size_t m = 0; m < counts.size(); ++m) {
      cumulative += counts[m];
      if (cumulative >= spec.particles) {
        FermiBall ball = build_fermi_ball_squared(static_cast<std::int64_t>(m));
        ball.requested_n = spec.particles;
        return ball;
      }
    }
    guess *= 2;
  }
}

std::int64_t count_pairs_exact(const FermiBall& ball, const LatticePredicate& patch, const IntVec3& k) {
  if (k.is_zero()) throw InvalidArgument("count_pairs_exact: zero relative momentum creates no particle-hole pair");

  const std::size_t n = ball.momenta.size();
  std::vector<std::int32_t> xs(n), ys(n), zs(n);
  std::int32_t reach = 0;
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = ball.momenta[i].x;
    ys[i] = ball.momenta[i].y;
    zs[i] = ball.momenta[i].z;
    reach = std::max(reach, ball.momenta[i].max_abs());
  }

  std::vector<std::uint8_t> outside(n);
  if (kernels::fits_shifted_mask(reach, k)) {
    kernels::shifted_outside_mask(xs, ys, zs, k, ball.radius_squared, outside);
  } else {
    for (std::size_t i = 0; i < n; ++i) outside[i] = ball.contains(ball.momenta[i] + k) ? 0 : 1;
  }

  std::int64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!outside[i]) continue;
    const IntVec3& h = ball.momenta[i];
    if (patch(h) && patch(h + k)) ++count;
  }
  return count;
}

}  // namespace bosonize
