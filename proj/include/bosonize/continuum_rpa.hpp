#pragma once

// The M -> infinity limit: the arcoth form of the dispersion equation, the
// plasmon branch, and the log-integral for the correlation energy.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bosonize/patches.hpp"
#include "bosonize/potential.hpp"
#include "bosonize/vec3.hpp"

namespace bosonize {

// -1 + sqrt(l) arcoth(sqrt(l)), for l > 1 (DomainError otherwise).
double continuum_lhs(double lambda);

// Which secular equation is continued to M -> infinity.
//   equation: sum over all 2 I_k patches, right side |k|^2 / (4 pi kappa)
//   matrix:   eigenvalues of A (I_k patches), right side |k|^2 / (2 pi kappa)
enum class DispersionModel { equation, matrix };

// Right-hand side of the continuum dispersion equation at |k|.
double dispersion_rhs(double abs_k, DispersionModel model = DispersionModel::equation);

// The lambda > 1 with continuum_lhs(lambda) = dispersion_rhs(abs_k).
double plasmon_continuum(double abs_k, DispersionModel model = DispersionModel::equation);

// (3/10) sqrt(3 kappa / pi).
double plasmon_coefficient();

// hbar (2 + plasmon_coefficient() |k|^2).
double plasmon_series(double abs_k, double hbar);

// Both sides of the comparison with the textbook dispersion
// lambda_pl(0) + (hbar^2 / m) alpha_RPA |k|^2, alpha_RPA = (3/5) E_F / lambda_pl(0),
// at particle number n: the series side hbar * plasmon_coefficient() and the
// textbook side built from E_F = hbar^2 k_F^2, m = 1/2, k_F = kappa n^(1/3).
struct RpaComparison {
  double series_side = 0.0;
  double textbook_side = 0.0;
  double alpha_rpa = 0.0;
};
RpaComparison rpa_comparison(double n_particles);

// (1/M) sum_alpha f(|khat . omega_alpha|) over all patches.
double riemann_average(const PatchSet& patches, const Vec3& direction, const std::function<double(double)>& f);

// F(l) = 1 - l arctan(1/l), evaluated without cancellation for large l.
double rpa_f(double lambda);

// Quadrature of F over [0, inf); equals pi/4.
double rpa_f_integral();

// Quadrature of F^2 over [0, inf).
double rpa_f2_integral();

// (1/pi) int_0^inf log(1 + V kappa 2pi F(l)) dl - V kappa pi / 2. The linear
// term is cancelled inside the integrand (int F = pi/4) so that the O(V^2)
// value keeps full relative precision.
double rpa_bracket(double v_hat_k);

// The limit of rpa_bracket(V) / V^2 as V -> 0: -(kappa 2pi)^2 / (2 pi) int F^2.
double rpa_bracket_second_order();

struct PlasmonSample {
  double k_abs = 0.0;
  double lambda = 0.0;
  double energy_hbar = 0.0;  // 2 kappa |k| sqrt(lambda)
};

struct PlasmonCurve {
  std::vector<PlasmonSample> samples;
  double fit_window_lo = 0.05;
  double fit_window_hi = 0.3;
  double intercept = 0.0;  // units of hbar
  double curvature = 0.0;  // coefficient of |k|^2, units of hbar
  int fit_points = 0;
};

// Samples |k| evenly on [k_min, k_max] (`steps` points) and fits
// energy = intercept + curvature |k|^2 over the samples inside the window.
PlasmonCurve plasmon_curve(double k_min, double k_max, int steps, double fit_lo = 0.05, double fit_hi = 0.3,
                           DispersionModel model = DispersionModel::equation);

// Least squares fit y = c0 + c1 x^2.
std::pair<double, double> fit_quadratic_even(const std::vector<double>& x, const std::vector<double>& y);

struct ModeEnergy {
  IntVec3 k;
  double v_hat = 0.0;
  int i_k = 0;
  std::optional<double> shift_finite_m;
  double shift_continuum = 0.0;
};

struct CorrelationEnergyReport {
  std::vector<ModeEnergy> per_mode;  // k in the half space, ascending |k|
  std::optional<double> total_finite_m;  // 2 kappa sum |k| shift(k), units of hbar
  double total_continuum = 0.0;          // kappa sum_{Z^3} |k| bracket(V(k)), units of hbar
  std::optional<double> relative_gap;
  int m_patches = 0;
  double delta = 0.0;
  double n_ref = 0.0;
  double hbar = 0.0;
  double k_range = 0.0;  // modes with |k| <= k_range were summed
  std::string potential_id;
  bool formal = false;  // Coulomb: V is not summable, so the total depends on the cutoff
};

struct EnergyOptions {
  std::optional<double> k_cutoff;
  const PatchSet* patches = nullptr;  // finite-M totals are skipped without patches
  double n_ref = 1e6;
  double delta = 0.05;
  int dense_limit = 400;  // modes with more bosons use the secular roots
};

CorrelationEnergyReport total_energy(const Potential& potential, const EnergyOptions& options);

// 1/2 tr(E - D - W) of one mode: dense when I_k <= dense_limit, otherwise from
// the secular roots.
double mode_shift(const Vec3& k, const PatchSet& patches, const Potential& potential, double n_ref, double delta,
                  int dense_limit = 400);

}  // namespace bosonize
