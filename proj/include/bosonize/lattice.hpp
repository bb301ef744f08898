#pragma once

// Exact integer-lattice geometry: the Fermi ball and particle-hole pair counts.
// All shell decisions use integer squared norms.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bosonize/vec3.hpp"

namespace bosonize {

struct FermiBall {
  double k_fermi = 0.0;               // radius in lattice units
  std::int64_t radius_squared = 0;    // largest admissible |k|^2 (integer)
  std::int64_t n_particles = 0;       // |{k in Z^3 : |k|^2 <= radius_squared}|
  std::vector<IntVec3> momenta;       // sorted by (|k|^2, x, y, z)
  double kappa = 0.0;
  double hbar = 0.0;

  // Set when built from a particle count that fell inside a shell.
  std::optional<std::int64_t> requested_n;

  bool contains(const IntVec3& k) const { return k.norm2() <= radius_squared; }
  bool rounded_up() const { return requested_n && *requested_n != n_particles; }
};

// Either a target radius or a target particle count.
struct BallSpec {
  enum class Kind { radius, particles };
  Kind kind = Kind::radius;
  double radius = 0.0;
  std::int64_t particles = 0;

  static BallSpec from_radius(double r) { return {Kind::radius, r, 0}; }
  static BallSpec from_particles(std::int64_t n) { return {Kind::particles, 0.0, n}; }
};

// Radius mode: every lattice point with |k| <= radius (shell boundaries are
// decided with a relative slack of 1e-12 on radius^2, so sqrt(5) gives the
// |k|^2 = 5 shell). Particle mode: the smallest full shell holding at least
// the requested number of points.
FermiBall build_fermi_ball(const BallSpec& spec);

// Ball of all points with |k|^2 <= radius_squared.
FermiBall build_fermi_ball_squared(std::int64_t radius_squared);

// Number of lattice points per squared norm, for m = 0..max_norm2.
std::vector<std::int64_t> shell_counts(std::int64_t max_norm2);

using LatticePredicate = std::function<bool(const IntVec3&)>;

// |{(p, h) : h in ball, p = h + k outside, patch(h) and patch(p)}|.
std::int64_t count_pairs_exact(const FermiBall& ball, const LatticePredicate& patch, const IntVec3& k);

}  // namespace bosonize
