#pragma once

// Eigenvalues of a diagonal plus rank-one matrix diag(p) + 2g |v><v| with
// v_i^2 = p_i, through the zeros of w(lambda) = 1 + 2g sum p_i / (p_i - lambda).

#include <vector>

#include "bosonize/mode_hamiltonian.hpp"

namespace bosonize {

struct SecularProblem {
  std::vector<double> poles;        // distinct, ascending
  std::vector<int> multiplicities;  // per distinct pole
  std::vector<double> pole_weights; // per distinct pole: sum of the grouped u^4
  std::vector<double> u4_weights;   // every u^4 entering the sum, ascending
  double g = 0.0;
  int m_total = 0;

  int dimension() const { return static_cast<int>(u4_weights.size()); }

  // Poles closer than 1e-12 (relative to max(1, p)) are merged.
  static SecularProblem from_weights(std::vector<double> u4, double g, int m_total = 0);

  // The I_k x I_k matrix A = d^2 + 2g u~ u~^T of the mode.
  static SecularProblem for_mode(const ModeHamiltonian& mode);

  // Same g, but the sum runs over all 2 I_k patches of the mode. For Coulomb
  // its zeros solve (1/M) sum_{2I_k} u^4 / (lambda - u^4) = |k|^2 / (4 pi kappa).
  static SecularProblem coulomb_form(const ModeHamiltonian& mode);
};

// w(lambda). Throws DomainError when lambda sits exactly on a pole.
double secular_value(double lambda, const SecularProblem& problem);

// dw/dlambda, same domain.
double secular_derivative(double lambda, const SecularProblem& problem);

// All eigenvalues, ascending, with multiplicity (dimension() values).
std::vector<double> secular_roots(const SecularProblem& problem);

// The root above the largest pole. Throws DomainError when g == 0.
double plasmon_root(const SecularProblem& problem);

// (1/M) sum over the 2 I_k patches of u^4 / (lambda - u^4) - |k|^2 / (4 pi kappa).
double coulomb_secular_residual(double lambda, const ModeHamiltonian& mode);

struct InterlacingReport {
  bool ok = false;
  std::vector<int> between;    // roots strictly inside (p_j, p_j+1)
  std::vector<int> at_pole;    // roots on p_j
  int above = 0;               // roots above the largest pole
  int below = 0;               // roots below the smallest pole (never allowed)
};

// Checks that each open gap between distinct poles holds exactly one root,
// that exactly one root lies above the top pole (when g > 0), and that a pole
// of multiplicity m carries m - 1 roots (m when g == 0).
InterlacingReport check_interlacing(const SecularProblem& problem, const std::vector<double>& roots);

// sum sqrt(root) - sum u^2 - g sum u^2: the shift 1/2 tr(E - D - W) of a
// for_mode problem, from its roots.
double shift_from_roots(const SecularProblem& problem, const std::vector<double>& roots);

}  // namespace bosonize
