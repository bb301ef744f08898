#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "bosonize/vec3.hpp"

namespace bosonize {

// Fourier coefficients V(k) of the pair interaction, as a pure callback.
struct Potential {
  std::string id;
  std::function<double(const Vec3&)> value;
  // Every k with V(k) != 0 satisfies |k| <= support_radius.
  std::optional<double> support_radius;
  bool coulomb = false;

  double operator()(const Vec3& k) const { return value(k); }
  bool compact() const { return support_radius.has_value(); }
};

Potential zero_potential();

// V(k) = |k|^-2.
Potential coulomb_potential();

// V(k) = strength for |k| <= radius, else 0.
Potential indicator_potential(double radius, double strength = 1.0);

// Values on lattice points; zero elsewhere and at non-integer k.
Potential tabulated_potential(std::map<IntVec3, double> table, std::string id = "table");

// Reads "x y z value" lines ('#' starts a comment).
Potential load_tabulated_potential(const std::string& path);

// "zero", "coulomb", "indicator:R[:V]" or "table:PATH".
Potential parse_potential(std::string_view spec);

}  // namespace bosonize
