#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"

#include "bosonize/bogoliubov.hpp"
#include "bosonize/constants.hpp"
#include "bosonize/continuum_rpa.hpp"
#include "bosonize/errors.hpp"
#include "bosonize/spectral_rank_one.hpp"

using namespace bosonize;

namespace {

// Dense eigenvalues of diag(p) + 2g v v^T with v_i = sqrt(p_i).
std::vector<double> dense_roots(const std::vector<double>& p, double g) {
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::VectorXd v(n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = std::sqrt(p[i]);
    a(i, i) = p[i];
  }
  a += 2 * g * v * v.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> random_u4(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.3, 1.0);
  std::vector<double> out(n);
  for (auto& x : out) x = std::pow(u(rng), 4);
  if (n > 3 && rng() % 2) out[2] = out[0];
  return out;
}

}  // namespace

TEST_CASE("secular function values") {
  const SecularProblem free = SecularProblem::from_weights({0.5, 1.0}, 0.0);
  CHECK(secular_value(0.7, free) == 1.0);
  const SecularProblem p = SecularProblem::from_weights({1.0, 1.0}, 0.5);
  CHECK(secular_value(3.0, p) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::fabs(secular_value(1e12, p) - 1.0) < 1e-11);
  CHECK_THROWS_AS(secular_value(1.0, p), DomainError);
  CHECK(p.poles.size() == 1);
  CHECK(p.multiplicities[0] == 2);
}

TEST_CASE("rank-one roots for u^4 = {1, 1}, g = 1/2") {
  const SecularProblem p = SecularProblem::from_weights({1.0, 1.0}, 0.5);
  const auto roots = secular_roots(p);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == 1.0);
  CHECK(roots[1] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(plasmon_root(p) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("zero coupling leaves the poles") {
  const SecularProblem p = SecularProblem::from_weights({0.2, 0.5, 0.5, 0.9}, 0.0);
  CHECK(secular_roots(p) == std::vector<double>{0.2, 0.5, 0.5, 0.9});
  CHECK_THROWS_AS(plasmon_root(p), DomainError);
  CHECK(check_interlacing(p, secular_roots(p)).ok);
}

TEST_CASE("invalid problems") {
  CHECK_THROWS_AS(SecularProblem::from_weights({0.5}, -1.0), InvalidArgument);
  CHECK_THROWS_AS(SecularProblem::from_weights({0.0}, 1.0), InvalidArgument);
  CHECK_THROWS_AS(SecularProblem::from_weights({1.5}, 1.0), InvalidArgument);
}

TEST_CASE("property: secular roots match dense eigenvalues (100 random problems)") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> gd(0.0, 2.0);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng() % 50);
    const auto u4 = random_u4(rng, n);
    const double g = gd(rng);
    const SecularProblem p = SecularProblem::from_weights(u4, g);
    const auto roots = secular_roots(p);
    const auto dense = dense_roots(u4, g);
    REQUIRE(static_cast<int>(roots.size()) == p.dimension());
    for (int i = 0; i < n; ++i) CHECK(std::fabs(roots[i] - dense[i]) <= 1e-9 * dense[i]);
    const auto report = check_interlacing(p, roots);
    CHECK(report.ok);
    CHECK(report.above == 1);
    CHECK(report.below == 0);
  }
}

TEST_CASE("interlacing checker rejects misplaced roots") {
  const SecularProblem p = SecularProblem::from_weights({0.2, 0.5, 0.9}, 0.4);
  auto roots = secular_roots(p);
  CHECK(check_interlacing(p, roots).ok);
  roots[0] = 0.1;
  CHECK_FALSE(check_interlacing(p, roots).ok);
}

TEST_CASE("property: roots are non-decreasing in g and the plasmon strictly increases") {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 30; ++t) {
    const auto u4 = random_u4(rng, 1 + static_cast<int>(rng() % 30));
    std::vector<double> previous;
    double previous_top = 0.0;
    for (double g : {0.01, 0.1, 0.2, 0.5, 1.0, 2.0}) {
      const SecularProblem p = SecularProblem::from_weights(u4, g);
      const auto roots = secular_roots(p);
      for (std::size_t i = 0; i < previous.size(); ++i) CHECK(roots[i] >= previous[i] * (1 - 1e-13));
      CHECK(plasmon_root(p) > previous_top);
      previous = roots;
      previous_top = plasmon_root(p);
    }
  }
}

TEST_CASE("matrix-model roots equal the eigenvalues of A and give the dense shift") {
  const PatchSet patches = PatchSet::partition_sphere(80);
  const ModeHamiltonian m = build_mode({1, 2, 0}, patches, coulomb_potential(), 1e6, 0.05);
  const BosonSpectrum s = diagonalize_mode(assemble_blocks(m));
  const SecularProblem p = SecularProblem::for_mode(m);
  const auto roots = secular_roots(p);
  REQUIRE(roots.size() == s.lambdas.size());
  for (std::size_t i = 0; i < roots.size(); ++i) CHECK(roots[i] == doctest::Approx(s.lambdas[i]).epsilon(1e-10));
  CHECK(shift_from_roots(p, roots) == doctest::Approx(s.shift).epsilon(1e-10));
}

TEST_CASE("dispersion equation: residual zeros are the roots of the 2 I_k problem") {
  std::mt19937_64 rng(33);
  std::normal_distribution<double> nd(0, 1);
  for (int t = 0; t < 20; ++t) {
    const PatchSet patches = PatchSet::partition_sphere(2 * (10 + t * 3));
    const Vec3 k = (0.2 + 0.1 * t) * Vec3{nd(rng), nd(rng), nd(rng)}.normalized();
    const ModeHamiltonian m = build_mode(k, patches, coulomb_potential(), 1e6, 0.05);
    if (m.degenerate) continue;
    const SecularProblem p = SecularProblem::coulomb_form(m);
    CHECK(p.dimension() == 2 * m.i_k);
    const auto roots = secular_roots(p);
    const auto dense = dense_roots(p.u4_weights, p.g);
    for (std::size_t i = 0; i < roots.size(); ++i) CHECK(std::fabs(roots[i] - dense[i]) <= 1e-9 * dense[i]);
    const double scale = k.dot(k) / (4 * std::numbers::pi * kKappa);
    const double top = roots.back();
    CHECK(std::fabs(coulomb_secular_residual(top, m)) <= 1e-10 * scale);
    // above the top root the pole sum only shrinks
    CHECK(coulomb_secular_residual(top * 1.01, m) < 0.0);
    CHECK(check_interlacing(p, roots).ok);
  }
}

TEST_CASE("dispersion residual limits and the continuum plasmon") {
  const PatchSet patches = PatchSet::partition_sphere(20000);
  const ModeHamiltonian m = build_mode({0, 0, 1}, patches, coulomb_potential(), 1e6, 3.0);
  CHECK(coulomb_secular_residual(1e15, m) == doctest::Approx(-1.0 / (4 * std::numbers::pi * kKappa)).epsilon(1e-9));
  const double top = plasmon_root(SecularProblem::coulomb_form(m));
  CHECK(top == doctest::Approx(plasmon_continuum(1.0)).epsilon(2e-3));
  CHECK_THROWS_AS(coulomb_secular_residual(0.5, make_mode({0.5}, 1.0)), InvalidArgument);
}

TEST_CASE("Coulomb plasmon rises as |k| shrinks") {
  const PatchSet patches = PatchSet::partition_sphere(200);
  double previous = 0.0;
  for (double k : {1.5, 1.0, 0.5, 0.2, 0.1, 0.05}) {
    const ModeHamiltonian m = build_mode(k * Vec3{0.36, 0.48, 0.8}, patches, coulomb_potential(), 1e6, 0.05);
    const double root = plasmon_root(SecularProblem::coulomb_form(m));
    CHECK(root > previous);
    previous = root;
  }
}
