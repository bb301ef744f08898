#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>

namespace bosonize {

// Integer lattice momentum in Z^3.
struct IntVec3 {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;

  constexpr std::int64_t norm2() const {
    return std::int64_t{x} * x + std::int64_t{y} * y + std::int64_t{z} * z;
  }
  constexpr bool is_zero() const { return x == 0 && y == 0 && z == 0; }
  constexpr std::int32_t max_abs() const {
    auto a = [](std::int32_t v) { return v < 0 ? -v : v; };
    std::int32_t m = a(x);
    if (a(y) > m) m = a(y);
    if (a(z) > m) m = a(z);
    return m;
  }

  friend constexpr IntVec3 operator+(IntVec3 a, IntVec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr IntVec3 operator-(IntVec3 a, IntVec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr IntVec3 operator-(IntVec3 a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr bool operator==(IntVec3, IntVec3) = default;
  friend constexpr auto operator<=>(IntVec3, IntVec3) = default;
};

// Real 3-vector: directions on the unit sphere and continuous mode momenta.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}
  constexpr explicit Vec3(IntVec3 v) : x(v.x), y(v.y), z(v.z) {}

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    const double n = norm();
    return {x / n, y / n, z / n};
  }
  constexpr bool is_zero() const { return x == 0.0 && y == 0.0 && z == 0.0; }

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr bool operator==(Vec3, Vec3) = default;
};

inline std::ostream& operator<<(std::ostream& os, const IntVec3& v) {
  return os << '(' << v.x << ',' << v.y << ',' << v.z << ')';
}
inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
  return os << '(' << v.x << ',' << v.y << ',' << v.z << ')';
}

}  // namespace bosonize
