#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"

#include "bosonize/constants.hpp"
#include "bosonize/errors.hpp"
#include "bosonize/patches.hpp"

using namespace bosonize;

namespace {

constexpr double kPi = std::numbers::pi;

// Fibonacci points: a deterministic near-uniform sample of the sphere.
std::vector<Vec3> fibonacci_sphere(int n) {
  std::vector<Vec3> pts;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(1.0 - z * z);
    pts.push_back({r * std::cos(golden * i), r * std::sin(golden * i), z});
  }
  return pts;
}

Vec3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Vec3{n(rng), n(rng), n(rng)}.normalized();
}

}  // namespace

TEST_CASE("two patches are the hemispheres") {
  const PatchSet p = PatchSet::partition_sphere(2);
  REQUIRE(p.size() == 2);
  CHECK(p.centers()[0].z == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.centers()[1].z == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::hypot(p.centers()[0].x, p.centers()[0].y) < 1e-15);
  CHECK(p.areas()[0] == doctest::Approx(2 * kPi).epsilon(1e-14));
  CHECK(p.areas()[1] == doctest::Approx(2 * kPi).epsilon(1e-14));
}

TEST_CASE("eight patches of area pi/2, confirmed by surface sampling") {
  const PatchSet p = PatchSet::partition_sphere(8);
  double total = 0.0;
  for (double a : p.areas()) {
    CHECK(a == doctest::Approx(kPi / 2).epsilon(1e-12));
    total += a;
  }
  CHECK(total == doctest::Approx(4 * kPi).epsilon(1e-12));

  const auto pts = fibonacci_sphere(200000);
  std::vector<int> hits(8, 0);
  for (const auto& v : pts) ++hits[*p.locate(v)];
  for (int h : hits) CHECK(std::fabs(4 * kPi * h / pts.size() - kPi / 2) < 5e-3);
}

TEST_CASE("corridors remove area, and the reduced areas match sampling") {
  const PatchSet two = PatchSet::partition_sphere(2, 0.1);
  CHECK(two.areas()[0] + two.areas()[1] < 4 * kPi);

  const double corridor = 0.04;
  const PatchSet p = PatchSet::partition_sphere(20, corridor);
  const auto pts = fibonacci_sphere(400000);
  std::vector<int> hits(20, 0);
  for (const auto& v : pts) {
    if (auto a = p.locate(v)) ++hits[*a];
  }
  double total = 0.0;
  for (int a = 0; a < 20; ++a) {
    total += p.areas()[a];
    CHECK(p.areas()[a] < 4 * kPi / 20);
    CHECK(std::fabs(4 * kPi * hits[a] / pts.size() - p.areas()[a]) < 4e-3);
  }
  CHECK(total < 4 * kPi);
}

TEST_CASE("invalid partitions") {
  CHECK_THROWS_AS(PatchSet::partition_sphere(7), InvalidArgument);
  CHECK_THROWS_AS(PatchSet::partition_sphere(0), InvalidArgument);
  CHECK_THROWS_AS(PatchSet::partition_sphere(-4), InvalidArgument);
  CHECK_THROWS_AS(PatchSet::partition_sphere(8, -0.1), InvalidArgument);
  CHECK_THROWS_AS(PatchSet::partition_sphere(8, 2.0), InvalidArgument);
}

TEST_CASE("property: unit centers, antipodal pairs, equal areas summing to 4pi") {
  for (int m : {2, 4, 6, 8, 10, 14, 20, 50, 100, 200, 398, 1000, 10000}) {
    CAPTURE(m);
    const PatchSet p = PatchSet::partition_sphere(m);
    double total = 0.0;
    const auto [lo, hi] = std::minmax_element(p.areas().begin(), p.areas().end());
    CHECK(*hi / *lo <= 1.0 + 1e-9);
    for (int a = 0; a < m; ++a) {
      total += p.areas()[a];
      CHECK(std::fabs(p.centers()[a].norm() - 1.0) < 1e-12);
      const Vec3 sum = p.centers()[a] + p.centers()[p.antipode(a)];
      CHECK(sum.norm() < 1e-15);
      if (a < m / 2) CHECK(p.centers()[a].z >= 0.0);
    }
    CHECK(std::fabs(total - 4 * kPi) < 1e-10);
  }
}

TEST_CASE("property: every direction lies in exactly one patch, antipodes in antipodal patches") {
  std::mt19937_64 rng(11);
  for (int m : {2, 6, 8, 36, 200}) {
    const PatchSet p = PatchSet::partition_sphere(m);
    for (int i = 0; i < 4000; ++i) {
      const Vec3 v = random_direction(rng);
      const auto a = p.locate(v);
      REQUIRE(a.has_value());
      int owners = 0;
      for (int b = 0; b < m; ++b) owners += p.contains(b, v);
      CHECK(owners == 1);
      CHECK(*p.locate(-v) == p.antipode(*a));
    }
    // equator and axes
    for (Vec3 v : {Vec3{1, 0, 0}, Vec3{-1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, -1, 0}, Vec3{0.6, -0.8, 0}, Vec3{0, 0, 1}}) {
      CHECK(*p.locate(-v) == p.antipode(*p.locate(v)));
    }
  }
  CHECK_FALSE(PatchSet::partition_sphere(8).locate(Vec3{0, 0, 0}).has_value());
}

TEST_CASE("patch centers lie inside their own patch") {
  for (int m : {8, 50, 300}) {
    const PatchSet p = PatchSet::partition_sphere(m);
    for (int a = 0; a < m; ++a) CHECK(p.contains(a, p.centers()[a]));
  }
}

TEST_CASE("index sets for perfect alignment and the closed boundary") {
  const PatchSet two = PatchSet::partition_sphere(2);
  const auto s = index_sets(two, {0, 0, 1}, 0.05, 1e6);
  CHECK(s.i_plus == std::vector<int>{0});
  CHECK(s.i_minus == std::vector<int>{1});
  // n_ref = 1 puts the cutoff at exactly 1 = khat . omega_0
  const auto edge = index_sets(two, {0, 0, 5}, 0.3, 1.0);
  CHECK(edge.cutoff == 1.0);
  CHECK(edge.i_plus == std::vector<int>{0});

  CHECK_THROWS_AS(index_sets(two, {0, 0, 0}, 0.05, 1e6), InvalidArgument);
  CHECK_THROWS_AS(index_sets(two, {0, 0, 1}, 0.0, 1e6), InvalidArgument);
}

TEST_CASE("index sets for M = 8 along x against direct dot products") {
  const PatchSet p = PatchSet::partition_sphere(8);
  const auto s = index_sets(p, {1, 0, 0}, 0.05, 1e6);
  const double cutoff = std::pow(1e6, -0.05);
  CHECK(cutoff == doctest::Approx(0.501187).epsilon(1e-6));
  std::set<int> plus, minus;
  for (int a = 0; a < 8; ++a) {
    if (p.centers()[a].x >= cutoff) plus.insert(a);
    if (-p.centers()[a].x >= cutoff) minus.insert(a);
  }
  CHECK(std::set<int>(s.i_plus.begin(), s.i_plus.end()) == plus);
  CHECK(std::set<int>(s.i_minus.begin(), s.i_minus.end()) == minus);
  CHECK(s.i_plus.size() == s.i_minus.size());
  for (int a : s.i_plus) CHECK(minus.count(a) == 0);
}

TEST_CASE("property: index sets are paired and disjoint for random modes") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 * (1 + trial % 60);
    const PatchSet p = PatchSet::partition_sphere(m);
    const Vec3 k = random_direction(rng);
    const double delta = 0.02 + 0.3 * (trial % 7) / 7.0;
    const auto s = index_sets(p, k, delta, 1e5);
    REQUIRE(s.i_plus.size() == s.i_minus.size());
    std::set<int> plus(s.i_plus.begin(), s.i_plus.end());
    for (std::size_t j = 0; j < s.i_plus.size(); ++j) {
      CHECK(s.i_minus[j] == p.antipode(s.i_plus[j]));
      CHECK(plus.count(s.i_minus[j]) == 0);
      CHECK(-k.dot(p.centers()[s.i_minus[j]]) >= s.cutoff);
    }
  }
}

TEST_CASE("half space") {
  CHECK(in_half_space(Vec3{0, 0, 1}));
  CHECK_FALSE(in_half_space(Vec3{0, 0, -1}));
  CHECK(in_half_space(Vec3{0, 1, 0}));
  CHECK_FALSE(in_half_space(IntVec3{-3, 0, 0}));
  CHECK_THROWS_AS(in_half_space(Vec3{0, 0, 0}), InvalidArgument);
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> c(-2, 2);
  for (int i = 0; i < 300; ++i) {
    const IntVec3 k{c(rng), c(rng), c(rng)};
    if (k.is_zero()) continue;
    CHECK(in_half_space(k) != in_half_space(-k));
  }
}

TEST_CASE("approximate normalization") {
  const PatchSet p = PatchSet::partition_sphere(100);
  const Vec3 k = p.centers()[0];  // |k . omega_0| = 1
  const double n = normalization_approx(p, 0, k, 1e6);
  CHECK(n * n == doctest::Approx(4 * kPi * 1e4 / 100).epsilon(1e-12));
  CHECK(n * n == doctest::Approx(1256.6).epsilon(1e-4));

  const PatchSet two = PatchSet::partition_sphere(2);
  CHECK(normalization_approx(two, 0, {1, 0, 0}, 1e6) == 0.0);
  CHECK_THROWS_AS(normalization_approx(two, 2, {1, 0, 0}, 1e6), InvalidArgument);
}

TEST_CASE("exact normalization sits near kappa^2 times the interpolation formula") {
  // The lattice count in a patch of solid angle 4pi/M at radius k_F is
  // 4pi k_F^2 |k . omega| / M = kappa^2 4pi N^(2/3) |k . omega| / M.
  const PatchSet p = PatchSet::partition_sphere(100);
  for (std::int64_t n : {100000, 1000000}) {
    const FermiBall ball = build_fermi_ball(BallSpec::from_particles(n));
    const double exact = std::pow(normalization(p, 0, {0, 0, 1}, ball, NormalizationMode::exact), 2);
    const double approx = std::pow(normalization(p, 0, {0, 0, 1}, ball, NormalizationMode::approx), 2);
    CHECK(std::fabs(exact / approx - kKappa * kKappa) < 0.03);
  }
}

TEST_CASE("property: Riemann sums over patches converge to the sphere average") {
  const Vec3 dir = Vec3{0.36, 0.48, 0.8}.normalized();
  auto f = [](double c) { return std::exp(c) * c * c; };
  // (1/4pi) int f(cos theta) dOmega = (1/2) int_-1^1 e^x x^2 dx
  const double exact = 0.5 * ((std::exp(1.0) * 1.0) - std::exp(-1.0) * 5.0);
  double previous = 1e9;
  for (int m : {20, 200, 2000, 20000}) {
    const PatchSet p = PatchSet::partition_sphere(m);
    double sum = 0.0;
    for (const auto& c : p.centers()) sum += f(dir.dot(c));
    const double err = std::fabs(sum / m - exact);
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-4);
}

TEST_CASE("text serialization: one line per patch, round-trip numbers") {
  const PatchSet p = PatchSet::partition_sphere(12);
  std::ostringstream os;
  p.write_text(os);
  std::istringstream in(os.str());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int idx;
    double x, y, z, area;
    ls >> idx >> x >> y >> z >> area;
    CHECK(idx == rows);
    CHECK(x == p.centers()[idx].x);
    CHECK(y == p.centers()[idx].y);
    CHECK(z == p.centers()[idx].z);
    CHECK(area == p.areas()[idx]);
    ++rows;
  }
  CHECK(rows == 12);
}

TEST_CASE("corridor angle conversion") {
  CHECK(corridor_angle(2.0, 40.0) == doctest::Approx(0.05));
  CHECK_THROWS_AS(corridor_angle(1.0, 0.0), InvalidArgument);
}
