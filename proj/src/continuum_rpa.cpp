#include "bosonize/continuum_rpa.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "bosonize/bogoliubov.hpp"
#include "bosonize/constants.hpp"
#include "bosonize/errors.hpp"
#include "bosonize/kernels.hpp"
#include "bosonize/mode_hamiltonian.hpp"
#include "bosonize/quadrature.hpp"
#include "bosonize/spectral_rank_one.hpp"

namespace bosonize {

namespace {

constexpr double kPi = std::numbers::pi;

// log(1 + x) - x
double log1p_minus_x(double x) {
  if (std::fabs(x) < 1e-3) {
    return x * x * (-1.0 / 2 + x * (1.0 / 3 + x * (-1.0 / 4 + x * (1.0 / 5 - x / 6))));
  }
  return std::log1p(x) - x;
}

// int_0^inf of f, where f(l) ~ tail(L) beyond L has been summed analytically.
double integrate_half_line(const std::function<double(double)>& f, double cut, double tail, double abs_tol,
                           const char* what) {
  double total = 0.0;
  double err = 0.0;
  double a = 0.0;
  for (double b : {1.0, 10.0, cut}) {
    if (b <= a) continue;
    const auto r = integrate_adaptive(f, a, b, abs_tol, 1e-13, 20000);
    total += r.value;
    err += r.error_estimate;
    a = b;
  }
  const double bound = 1e-10 * std::max(1.0, std::fabs(total + tail));
  if (err > bound) {
    std::ostringstream msg;
    msg << what << ": quadrature error estimate " << err << " above " << bound;
    throw NumericalFailure(msg.str());
  }
  return total + tail;
}

}  // namespace

double continuum_lhs(double lambda) {
  if (!(lambda > 1.0)) throw DomainError("continuum_lhs: arcoth(sqrt(lambda)) needs lambda > 1");
  if (lambda > 1e4) {
    // sum_{n >= 1} lambda^-n / (2n + 1)
    double term = 1.0;
    double sum = 0.0;
    for (int n = 1; n < 40; ++n) {
      term /= lambda;
      sum += term / (2 * n + 1);
      if (term < 1e-18 * sum) break;
    }
    return sum;
  }
  const double x = std::sqrt(lambda);
  return -1.0 + x * 0.5 * std::log1p(2.0 / (x - 1.0));
}

double dispersion_rhs(double abs_k, DispersionModel model) {
  const double rhs = abs_k * abs_k / (4.0 * kPi * kKappa);
  return model == DispersionModel::equation ? rhs : 2.0 * rhs;
}

double plasmon_continuum(double abs_k, DispersionModel model) {
  if (!(abs_k > 0.0) || !std::isfinite(abs_k)) throw InvalidArgument("plasmon_continuum: |k| must be positive");
  const double rhs = dispersion_rhs(abs_k, model);
  // continuum_lhs(l) <= 1 / (3 (l - 1)), so the root lies below 1 + 1/(3 rhs).
  double lo = 1.0;
  double hi = 1.0 + 1.0 / (3.0 * rhs);
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= 1e-15 * hi) return mid;
    (continuum_lhs(mid) > rhs ? lo : hi) = mid;
  }
  throw NumericalFailure("plasmon_continuum: bisection did not converge");
}

double plasmon_coefficient() { return 0.3 * std::sqrt(3.0 * kKappa / kPi); }

double plasmon_series(double abs_k, double hbar) {
  if (abs_k < 0.0) throw InvalidArgument("plasmon_series: |k| must be non-negative");
  return hbar * (2.0 + plasmon_coefficient() * abs_k * abs_k);
}

RpaComparison rpa_comparison(double n_particles) {
  if (!(n_particles >= 1.0)) throw InvalidArgument("rpa_comparison: particle number must be >= 1");
  RpaComparison c;
  const double hbar = std::pow(n_particles, -1.0 / 3.0);
  const double kappa = std::pow(3.0 / (4.0 * kPi), 1.0 / 3.0);
  const double k_fermi = kappa * std::pow(n_particles, 1.0 / 3.0);
  const double e_fermi = hbar * hbar * k_fermi * k_fermi;
  const double mass = 0.5;
  const double plasma = 2.0 * hbar;
  c.alpha_rpa = 0.6 * e_fermi / plasma;
  c.textbook_side = hbar * hbar / mass * c.alpha_rpa;
  c.series_side = hbar * plasmon_coefficient();
  return c;
}

double riemann_average(const PatchSet& patches, const Vec3& direction, const std::function<double(double)>& f) {
  if (direction.is_zero()) throw InvalidArgument("riemann_average: zero direction");
  std::vector<double> proj(static_cast<std::size_t>(patches.size()));
  kernels::abs_projections(patches.center_x(), patches.center_y(), patches.center_z(), direction.normalized(), proj);
  double sum = 0.0;
  for (double c : proj) sum += f(c);
  return sum / patches.size();
}

double rpa_f(double lambda) {
  if (lambda < 0.0) throw DomainError("rpa_f: lambda must be non-negative");
  if (lambda == 0.0) return 1.0;
  if (lambda > 30.0) {
    // sum_{n >= 1} (-1)^(n+1) lambda^-2n / (2n + 1)
    const double inv2 = 1.0 / (lambda * lambda);
    double term = 1.0;
    double sum = 0.0;
    for (int n = 1; n < 20; ++n) {
      term *= inv2;
      sum += (n % 2 == 1 ? 1.0 : -1.0) * term / (2 * n + 1);
    }
    return sum;
  }
  return 1.0 - lambda * std::atan(1.0 / lambda);
}

double rpa_f_integral() {
  // F = 1/(3l^2) - 1/(5l^4) + 1/(7 l^6) ... beyond the cut
  const double cut = 1e4;
  const double tail = 1.0 / (3 * cut) - 1.0 / (15 * std::pow(cut, 3)) + 1.0 / (35 * std::pow(cut, 5));
  return integrate_half_line(rpa_f, cut, tail, 1e-15, "rpa_f_integral");
}

double rpa_f2_integral() {
  // F^2 = 1/(9 l^4) - 2/(15 l^6) ...
  const double cut = 1e3;
  const double tail = 1.0 / (27 * std::pow(cut, 3)) - 2.0 / (75 * std::pow(cut, 5));
  return integrate_half_line([](double l) { return rpa_f(l) * rpa_f(l); }, cut, tail, 1e-15, "rpa_f2_integral");
}

double rpa_bracket(double v_hat_k) {
  if (!(v_hat_k >= 0.0)) throw InvalidArgument("rpa_bracket: potential value must be non-negative");
  if (v_hat_k == 0.0) return 0.0;
  const double a = v_hat_k * kKappa * 2.0 * kPi;
  // log(1 + aF) - aF ~ -a^2 / (18 l^4) + (a^2 / 15 + a^3 / 81) / l^6
  const double cut = std::max(50.0, std::pow((a * a + a * a * a) * 1e15, 0.2));
  const double tail = -a * a / (54 * std::pow(cut, 3)) + (a * a / 75 + a * a * a / 405) / std::pow(cut, 5);
  const double abs_tol = std::max(1e-300, 1e-14 * a * a);
  const double integral = integrate_half_line([a](double l) { return log1p_minus_x(a * rpa_f(l)); }, cut, tail,
                                              abs_tol, "rpa_bracket");
  // (1/pi) int log(1 + aF) = (1/pi) int (log(1 + aF) - aF) + a/4, and a/4 = V kappa pi / 2.
  return integral / kPi;
}

double rpa_bracket_second_order() {
  const double a1 = kKappa * 2.0 * kPi;
  return -a1 * a1 / (2.0 * kPi) * rpa_f2_integral();
}

std::pair<double, double> fit_quadratic_even(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit: need at least two points");
  Eigen::MatrixXd design(static_cast<Eigen::Index>(x.size()), 2);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    design(static_cast<Eigen::Index>(i), 0) = 1.0;
    design(static_cast<Eigen::Index>(i), 1) = x[i] * x[i];
    rhs(static_cast<Eigen::Index>(i)) = y[i];
  }
  const Eigen::VectorXd c = design.colPivHouseholderQr().solve(rhs);
  return {c(0), c(1)};
}

PlasmonCurve plasmon_curve(double k_min, double k_max, int steps, double fit_lo, double fit_hi,
                           DispersionModel model) {
  if (!(k_min > 0.0) || !(k_max >= k_min) || steps < 1) {
    throw InvalidArgument("plasmon_curve: need 0 < k_min <= k_max and steps >= 1");
  }
  PlasmonCurve curve;
  curve.fit_window_lo = fit_lo;
  curve.fit_window_hi = fit_hi;
  std::vector<double> xs, ys;
  for (int i = 0; i < steps; ++i) {
    const double k = steps == 1 ? k_min : k_min + (k_max - k_min) * i / (steps - 1);
    PlasmonSample s;
    s.k_abs = k;
    s.lambda = plasmon_continuum(k, model);
    s.energy_hbar = 2.0 * kKappa * k * std::sqrt(s.lambda);
    curve.samples.push_back(s);
    if (k >= fit_lo * (1 - 1e-12) && k <= fit_hi * (1 + 1e-12)) {
      xs.push_back(k);
      ys.push_back(s.energy_hbar);
    }
  }
  curve.fit_points = static_cast<int>(xs.size());
  if (xs.size() >= 2) std::tie(curve.intercept, curve.curvature) = fit_quadratic_even(xs, ys);
  return curve;
}

double mode_shift(const Vec3& k, const PatchSet& patches, const Potential& potential, double n_ref, double delta,
                  int dense_limit) {
  const ModeHamiltonian mode = build_mode(k, patches, potential, n_ref, delta);
  if (mode.degenerate || mode.g == 0.0) return 0.0;
  if (mode.i_k <= dense_limit) return diagonalize_mode(assemble_blocks(mode)).shift;
  const SecularProblem problem = SecularProblem::for_mode(mode);
  return shift_from_roots(problem, secular_roots(problem));
}

CorrelationEnergyReport total_energy(const Potential& potential, const EnergyOptions& opt) {
  double range = 0.0;
  if (potential.compact()) {
    range = *potential.support_radius;
    if (opt.k_cutoff) range = std::min(range, *opt.k_cutoff);
  } else if (opt.k_cutoff) {
    range = *opt.k_cutoff;
  } else {
    throw InvalidArgument("total_energy: potential '" + potential.id +
                          "' has no compact support; the mode sum diverges without a k cutoff");
  }
  if (!(range >= 0.0)) throw InvalidArgument("total_energy: k cutoff must be non-negative");

  CorrelationEnergyReport report;
  report.potential_id = potential.id;
  report.formal = potential.coulomb;
  report.k_range = range;
  report.delta = opt.delta;
  report.n_ref = opt.n_ref;
  report.hbar = hbar_for(opt.n_ref);
  report.m_patches = opt.patches ? opt.patches->size() : 0;

  const auto reach = static_cast<std::int32_t>(std::floor(range));
  const auto r2 = static_cast<std::int64_t>(std::floor(range * range * (1.0 + 1e-12)));
  std::vector<IntVec3> modes;
  for (std::int32_t x = -reach; x <= reach; ++x) {
    for (std::int32_t y = -reach; y <= reach; ++y) {
      for (std::int32_t z = -reach; z <= reach; ++z) {
        const IntVec3 k{x, y, z};
        if (!k.is_zero() && k.norm2() <= r2) modes.push_back(k);
      }
    }
  }
  std::sort(modes.begin(), modes.end(), [](const IntVec3& a, const IntVec3& b) {
    return a.norm2() != b.norm2() ? a.norm2() < b.norm2() : a < b;
  });

  std::map<double, double> bracket_cache;
  auto bracket = [&](double v) {
    auto it = bracket_cache.find(v);
    if (it == bracket_cache.end()) it = bracket_cache.emplace(v, rpa_bracket(v)).first;
    return it->second;
  };

  double cont = 0.0;
  double finite = 0.0;
  for (const IntVec3& k : modes) {
    const Vec3 kv(k);
    const double v = potential(kv);
    if (!(v >= 0.0)) throw InvalidArgument("total_energy: potential is negative at a mode in range");
    const double b = bracket(v);
    cont += kKappa * kv.norm() * b;
    if (!in_half_space(k)) continue;
    ModeEnergy me;
    me.k = k;
    me.v_hat = v;
    me.shift_continuum = b;
    if (opt.patches) {
      const ModeHamiltonian mode = build_mode(kv, *opt.patches, potential, opt.n_ref, opt.delta);
      me.i_k = mode.i_k;
      me.shift_finite_m = mode_shift(kv, *opt.patches, potential, opt.n_ref, opt.delta, opt.dense_limit);
      finite += 2.0 * kKappa * kv.norm() * *me.shift_finite_m;
    }
    report.per_mode.push_back(me);
  }
  report.total_continuum = cont;
  if (opt.patches) {
    report.total_finite_m = finite;
    if (cont != 0.0) report.relative_gap = std::fabs(finite - cont) / std::fabs(cont);
  }
  return report;
}

}  // namespace bosonize
