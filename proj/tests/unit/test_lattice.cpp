#include <cmath>
#include <random>

#include "doctest.h"

#include "bosonize/errors.hpp"
#include "bosonize/lattice.hpp"

using namespace bosonize;

namespace {

// Plain cube enumeration, independent of the library's ball iteration.
std::int64_t naive_pairs(double k_fermi, const LatticePredicate& patch, IntVec3 k) {
  const auto r2 = static_cast<std::int64_t>(std::floor(k_fermi * k_fermi + 1e-9));
  const int c = static_cast<int>(std::ceil(k_fermi)) + k.max_abs();
  std::int64_t count = 0;
  for (int x = -c; x <= c; ++x)
    for (int y = -c; y <= c; ++y)
      for (int z = -c; z <= c; ++z) {
        const IntVec3 h{x, y, z};
        const IntVec3 p = h + k;
        if (h.norm2() <= r2 && p.norm2() > r2 && patch(h) && patch(p)) ++count;
      }
  return count;
}

LatticePredicate everything() {
  return [](const IntVec3&) { return true; };
}

// Pseudo-random membership that is stable per lattice point.
LatticePredicate hashed(std::uint64_t salt) {
  return [salt](const IntVec3& q) {
    std::uint64_t h = salt ^ (static_cast<std::uint64_t>(q.x + 1000) * 0x9E3779B97F4A7C15ULL);
    h ^= static_cast<std::uint64_t>(q.y + 1000) * 0xC2B2AE3D27D4EB4FULL;
    h ^= static_cast<std::uint64_t>(q.z + 1000) * 0x165667B19E3779F9ULL;
    h ^= h >> 29;
    h *= 0xBF58476D1CE4E5B9ULL;
    return ((h >> 32) & 3) != 0;
  };
}

}  // namespace

TEST_CASE("unit radius ball holds the origin and six neighbours") {
  const FermiBall ball = build_fermi_ball(BallSpec::from_radius(1.0));
  CHECK(ball.n_particles == 7);
  CHECK(ball.momenta.front() == IntVec3{0, 0, 0});
  CHECK(ball.hbar == doctest::Approx(std::pow(7.0, -1.0 / 3.0)).epsilon(1e-15));
}

TEST_CASE("radius sqrt(5) includes the |k|^2 = 5 shell") {
  const FermiBall ball = build_fermi_ball(BallSpec::from_radius(std::sqrt(5.0)));
  CHECK(ball.n_particles == 57);
  CHECK(ball.radius_squared == 5);
}

TEST_CASE("target N = 1 gives the single-point ball") {
  const FermiBall ball = build_fermi_ball(BallSpec::from_particles(1));
  CHECK(ball.k_fermi == 0.0);
  REQUIRE(ball.momenta.size() == 1);
  CHECK(ball.momenta[0] == IntVec3{0, 0, 0});
  CHECK_FALSE(ball.rounded_up());
}

TEST_CASE("target N inside a shell rounds up to the full shell") {
  const FermiBall ball = build_fermi_ball(BallSpec::from_particles(8));
  CHECK(ball.n_particles == 19);
  CHECK(ball.rounded_up());
  CHECK(*ball.requested_n == 8);
  CHECK(build_fermi_ball(BallSpec::from_particles(57)).n_particles == 57);
}

TEST_CASE("invalid ball specifications") {
  CHECK_THROWS_AS(build_fermi_ball(BallSpec::from_particles(0)), InvalidArgument);
  CHECK_THROWS_AS(build_fermi_ball(BallSpec::from_particles(-3)), InvalidArgument);
  CHECK_THROWS_AS(build_fermi_ball(BallSpec::from_radius(-1.0)), InvalidArgument);
}

TEST_CASE("n_particles counts every lattice point inside the radius") {
  for (double r : {0.5, 1.0, 1.5, 2.0, 3.3, 4.0, 6.7}) {
    const int c = static_cast<int>(std::ceil(r));
    std::int64_t n = 0;
    for (int x = -c; x <= c; ++x)
      for (int y = -c; y <= c; ++y)
        for (int z = -c; z <= c; ++z) n += (x * x + y * y + z * z <= r * r + 1e-9);
    CHECK(build_fermi_ball(BallSpec::from_radius(r)).n_particles == n);
  }
}

TEST_CASE("shell exactness: N(r) is non-decreasing and jumps only at sqrt(m)") {
  const auto counts = shell_counts(60);
  std::int64_t previous = 0;
  for (int m = 0; m <= 60; ++m) {
    const auto at = build_fermi_ball(BallSpec::from_radius(std::sqrt(static_cast<double>(m)))).n_particles;
    const auto just_below = m == 0 ? 0 : build_fermi_ball(BallSpec::from_radius(std::sqrt(m - 0.001))).n_particles;
    CHECK(at >= previous);
    CHECK(just_below == previous);
    CHECK(at - previous == counts[m]);
    previous = at;
  }
}

TEST_CASE("k_F / (kappa N^(1/3)) tends to one") {
  double previous = 1.0;
  for (double r : {5.0, 10.0, 20.0, 40.0}) {
    const FermiBall ball = build_fermi_ball(BallSpec::from_radius(r));
    const double dev = std::fabs(ball.k_fermi / (ball.kappa * std::cbrt(static_cast<double>(ball.n_particles))) - 1.0);
    CHECK(dev < previous);
    previous = dev;
  }
  CHECK(previous < 5e-3);
}

TEST_CASE("pair counts in the unit ball") {
  const FermiBall ball = build_fermi_ball(BallSpec::from_radius(1.0));
  CHECK(count_pairs_exact(ball, everything(), {1, 0, 0}) == 5);
  CHECK(count_pairs_exact(ball, everything(), {3, 0, 0}) == 7);
  CHECK(count_pairs_exact(ball, [](const IntVec3&) { return false; }, {1, 2, 0}) == 0);
  CHECK_THROWS_AS(count_pairs_exact(ball, everything(), {0, 0, 0}), InvalidArgument);
}

TEST_CASE("pair counts agree with cube enumeration") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> comp(-4, 4);
  for (double r : {2.0, 3.5, 7.2}) {
    const FermiBall ball = build_fermi_ball(BallSpec::from_radius(r));
    for (int trial = 0; trial < 12; ++trial) {
      IntVec3 k{comp(rng), comp(rng), comp(rng)};
      if (k.is_zero()) k = {1, 0, 0};
      const auto patch = hashed(static_cast<std::uint64_t>(trial));
      CHECK(count_pairs_exact(ball, patch, k) == naive_pairs(r, patch, k));
    }
  }
}

TEST_CASE("property: reflecting the patch and negating k preserves the count") {
  const FermiBall ball = build_fermi_ball(BallSpec::from_radius(6.0));
  for (std::uint64_t salt = 1; salt <= 10; ++salt) {
    const auto patch = hashed(salt);
    const LatticePredicate reflected = [patch](const IntVec3& q) { return patch(-q); };
    for (IntVec3 k : {IntVec3{1, 0, 0}, IntVec3{0, 2, 1}, IntVec3{-1, 1, 3}}) {
      CHECK(count_pairs_exact(ball, reflected, -k) == count_pairs_exact(ball, patch, k));
    }
  }
}

TEST_CASE("property: enlarging the patch never lowers the count") {
  const FermiBall ball = build_fermi_ball(BallSpec::from_radius(5.0));
  for (std::uint64_t salt = 1; salt <= 8; ++salt) {
    const auto small = hashed(salt);
    const auto other = hashed(salt + 100);
    const LatticePredicate big = [small, other](const IntVec3& q) { return small(q) || other(q); };
    for (IntVec3 k : {IntVec3{1, 1, 0}, IntVec3{0, 0, 2}}) {
      CHECK(count_pairs_exact(ball, big, k) >= count_pairs_exact(ball, small, k));
      CHECK(count_pairs_exact(ball, everything(), k) >= count_pairs_exact(ball, big, k));
    }
  }
}
