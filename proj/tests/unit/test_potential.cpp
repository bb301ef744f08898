#include <cstdio>
#include <fstream>

#include "doctest.h"

#include "bosonize/errors.hpp"
#include "bosonize/potential.hpp"

using namespace bosonize;

TEST_CASE("built-in potentials") {
  CHECK(zero_potential()(Vec3{1, 2, 3}) == 0.0);
  CHECK(zero_potential().compact());

  const Potential c = coulomb_potential();
  CHECK(c.coulomb);
  CHECK_FALSE(c.compact());
  CHECK(c(Vec3{0, 0, 2}) == 0.25);

  const Potential ind = indicator_potential(2.0, 0.5);
  CHECK(ind(Vec3{0, 0, 2}) == 0.5);
  CHECK(ind(Vec3{1, 1, 1}) == 0.5);
  CHECK(ind(Vec3{2, 1, 0}) == 0.0);
  CHECK(*ind.support_radius == 2.0);
}

TEST_CASE("parsing potential descriptors") {
  CHECK(parse_potential("coulomb").coulomb);
  CHECK(parse_potential("zero")(Vec3{1, 0, 0}) == 0.0);
  const Potential p = parse_potential("indicator:1.5");
  CHECK(p(Vec3{1, 0, 0}) == 1.0);
  CHECK(p(Vec3{1, 1, 0}) == 1.0);
  CHECK(p(Vec3{1, 1, 1}) == 0.0);
  CHECK(parse_potential("indicator:2:3")(Vec3{0, 2, 0}) == 3.0);
  CHECK(parse_potential("indicator:2:3").id == "indicator:2:3");
  CHECK_THROWS_AS(parse_potential("yukawa"), InvalidArgument);
  CHECK_THROWS_AS(parse_potential("indicator:x"), InvalidArgument);
  CHECK_THROWS_AS(parse_potential("indicator:-1"), InvalidArgument);
  CHECK_THROWS_AS(parse_potential("indicator:1:-2"), InvalidArgument);
}

TEST_CASE("tabulated potential from file") {
  const char* path = "test_potential_table.txt";
  {
    std::ofstream f(path);
    f << "# x y z value\n1 0 0 0.5\n-1 0 0 0.5\n0 2 0 0.25  # comment\n\n";
  }
  const Potential p = parse_potential(std::string("table:") + path);
  CHECK(p(Vec3{1, 0, 0}) == 0.5);
  CHECK(p(Vec3{0, 2, 0}) == 0.25);
  CHECK(p(Vec3{0, 0, 1}) == 0.0);
  CHECK(p(Vec3{0.5, 0, 0}) == 0.0);
  CHECK(*p.support_radius == 2.0);
  {
    std::ofstream f(path);
    f << "1 0\n";
  }
  CHECK_THROWS_AS(load_tabulated_potential(path), InvalidArgument);
  std::remove(path);
  CHECK_THROWS_AS(load_tabulated_potential("does/not/exist"), InvalidArgument);
}
