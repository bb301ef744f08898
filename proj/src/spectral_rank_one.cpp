#include "bosonize/spectral_rank_one.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bosonize/constants.hpp"
#include "bosonize/errors.hpp"
#include "bosonize/kernels.hpp"

namespace bosonize {

namespace {

constexpr double kMergeTol = 1e-12;
constexpr int kMaxBisections = 400;

bool is_pole(double lambda, const SecularProblem& p) {
  return std::binary_search(p.poles.begin(), p.poles.end(), lambda);
}

// Zero of the increasing function w on (lo, hi), w(lo+) < 0 < w(hi-).
double bracketed_root(const SecularProblem& p, double lo, double hi) {
  const double width_tol = 1e-13 * std::max(1.0, hi);
  for (int it = 0; it < kMaxBisections; ++it) {
    if (hi - lo <= width_tol) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const auto s = kernels::pole_sums(p.poles, p.pole_weights, mid);
    const double w = 1.0 + 2.0 * p.g * s.value;
    if (!std::isfinite(w)) {
      std::ostringstream msg;
      msg << "secular root search: non-finite w at lambda=" << mid << " in (" << lo << ", " << hi << ")";
      throw NumericalFailure(msg.str());
    }
    if (w == 0.0) return mid;
    (w < 0.0 ? lo : hi) = mid;
    if (it + 1 == kMaxBisections) {
      std::ostringstream msg;
      msg << "secular root search did not converge in (" << lo << ", " << hi << ")";
      throw NumericalFailure(msg.str());
    }
  }
  double x = 0.5 * (lo + hi);
  for (int step = 0; step < 2; ++step) {
    const auto s = kernels::pole_sums(p.poles, p.pole_weights, x);
    const double w = 1.0 + 2.0 * p.g * s.value;
    const double dw = 2.0 * p.g * s.derivative;
    if (!(dw > 0.0)) break;
    const double next = x - w / dw;
    if (!(next > lo && next < hi)) break;
    x = next;
  }
  return x;
}

}  // namespace

SecularProblem SecularProblem::from_weights(std::vector<double> u4, double g, int m_total) {
  if (!(g >= 0.0)) throw InvalidArgument("secular problem: coupling must be non-negative");
  for (double x : u4) {
    if (!(x > 0.0 && x <= 1.0 + 1e-12)) throw InvalidArgument("secular problem: poles must lie in (0, 1]");
  }
  std::sort(u4.begin(), u4.end());
  SecularProblem p;
  p.g = g;
  p.m_total = m_total;
  for (double x : u4) {
    if (!p.poles.empty() && x - p.poles.back() <= kMergeTol * std::max(1.0, x)) {
      ++p.multiplicities.back();
      p.pole_weights.back() += x;
    } else {
      p.poles.push_back(x);
      p.multiplicities.push_back(1);
      p.pole_weights.push_back(x);
    }
  }
  p.u4_weights = std::move(u4);
  return p;
}

SecularProblem SecularProblem::for_mode(const ModeHamiltonian& mode) {
  std::vector<double> u4;
  u4.reserve(mode.u.size());
  for (double x : mode.u) u4.push_back(x * x * x * x);
  return from_weights(std::move(u4), mode.g, mode.m_patches);
}

SecularProblem SecularProblem::coulomb_form(const ModeHamiltonian& mode) {
  std::vector<double> u4;
  u4.reserve(2 * mode.u.size());
  for (int half = 0; half < 2; ++half) {
    for (double x : mode.u) u4.push_back(x * x * x * x);
  }
  return from_weights(std::move(u4), mode.g, mode.m_patches);
}

double secular_value(double lambda, const SecularProblem& p) {
  if (is_pole(lambda, p)) throw DomainError("secular_value: lambda lies on a pole");
  return 1.0 + 2.0 * p.g * kernels::pole_sums(p.poles, p.pole_weights, lambda).value;
}

double secular_derivative(double lambda, const SecularProblem& p) {
  if (is_pole(lambda, p)) throw DomainError("secular_derivative: lambda lies on a pole");
  return 2.0 * p.g * kernels::pole_sums(p.poles, p.pole_weights, lambda).derivative;
}

std::vector<double> secular_roots(const SecularProblem& p) {
  std::vector<double> roots;
  roots.reserve(p.u4_weights.size());
  const std::size_t n = p.poles.size();
  if (p.g == 0.0) return p.u4_weights;

  for (std::size_t j = 0; j < n; ++j) {
    roots.insert(roots.end(), static_cast<std::size_t>(p.multiplicities[j] - 1), p.poles[j]);
    if (j + 1 < n) roots.push_back(bracketed_root(p, p.poles[j], p.poles[j + 1]));
  }
  if (n > 0) roots.push_back(plasmon_root(p));
  std::sort(roots.begin(), roots.end());
  return roots;
}

double plasmon_root(const SecularProblem& p) {
  if (p.g == 0.0) throw DomainError("plasmon_root: no plasmon without coupling (g = 0)");
  if (p.poles.empty()) throw DomainError("plasmon_root: no plasmon in an empty mode");
  const double total = std::accumulate(p.pole_weights.begin(), p.pole_weights.end(), 0.0);
  const double top = p.poles.back();
  return bracketed_root(p, top, top + 2.0 * p.g * total + 1.0);
}

double coulomb_secular_residual(double lambda, const ModeHamiltonian& mode) {
  if (mode.m_patches <= 0) throw InvalidArgument("coulomb_secular_residual: mode has no patch count");
  const SecularProblem p = SecularProblem::coulomb_form(mode);
  if (is_pole(lambda, p)) throw DomainError("coulomb_secular_residual: lambda lies on a pole");
  const auto s = kernels::pole_sums(p.poles, p.pole_weights, lambda);
  const double k2 = mode.k.dot(mode.k);
  return -s.value / mode.m_patches - k2 / (4.0 * std::numbers::pi * kKappa);
}

InterlacingReport check_interlacing(const SecularProblem& p, const std::vector<double>& roots) {
  InterlacingReport r;
  const std::size_t n = p.poles.size();
  r.between.assign(n > 0 ? n - 1 : 0, 0);
  r.at_pole.assign(n, 0);
  for (double x : roots) {
    const auto it = std::lower_bound(p.poles.begin(), p.poles.end(), x);
    const auto j = static_cast<std::size_t>(it - p.poles.begin());
    if (it != p.poles.end() && *it == x) {
      ++r.at_pole[j];
    } else if (j == 0) {
      ++r.below;
    } else if (j == n) {
      ++r.above;
    } else {
      ++r.between[j - 1];
    }
  }
  const bool coupled = p.g > 0.0;
  r.ok = r.below == 0 && r.above == (coupled && n > 0 ? 1 : 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (r.at_pole[j] != p.multiplicities[j] - (coupled ? 1 : 0)) r.ok = false;
  }
  for (int c : r.between) {
    if (c != (coupled ? 1 : 0)) r.ok = false;
  }
  return r;
}

double shift_from_roots(const SecularProblem& p, const std::vector<double>& roots) {
  if (p.g == 0.0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    total += std::sqrt(roots[i]) - std::sqrt(p.u4_weights[i]);
  }
  double u2 = 0.0;
  for (double x : p.u4_weights) u2 += std::sqrt(x);
  return total - p.g * u2;
}

}  // namespace bosonize
