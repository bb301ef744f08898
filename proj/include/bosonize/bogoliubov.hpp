#pragma once

// Dense diagonalization of one mode: E, the symplectic S, and the blocks
// A = d^1/2 (d + 2b) d^1/2 and B = (d + 2b)^1/2 d (d + 2b)^1/2 whose square
// roots carry the oscillator frequencies.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bosonize/mode_hamiltonian.hpp"

namespace bosonize {

// Square root of a symmetric positive semidefinite matrix through its
// eigendecomposition. Eigenvalues down to -1e-10 * ||m|| are rounding and are
// clamped to zero; anything more negative throws NotPositiveSemidefinite.
Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& m);

// m^-1/2 for symmetric positive definite m. Throws IllConditioned when the
// condition number exceeds 1e14; `what` names the matrix in the message.
Eigen::MatrixXd inverse_sqrt_pd(const Eigen::MatrixXd& m, const char* what = "matrix");

struct SymplecticFactorization {
  Eigen::MatrixXd E;         // ((D+W-W~)^1/2 (D+W+W~) (D+W-W~)^1/2)^1/2, 2I x 2I
  Eigen::MatrixXd S;         // 4I x 4I
  Eigen::MatrixXd U;         // (1/sqrt2) [[1, 1], [1, -1]], 2I x 2I
  Eigen::MatrixXcd theta;    // (c, c*) = theta (phi, pi), 4I x 4I
  Eigen::MatrixXd a_matrix;  // I x I
  Eigen::MatrixXd b_matrix;  // I x I
};

SymplecticFactorization build_factorization(const QuadraticBlocks& blocks);

// Standard symplectic form [[0, 1], [-1, 0]] of size 2n x 2n.
Eigen::MatrixXd symplectic_form(Eigen::Index n);

// diag(A^1/2, B^1/2), each root taken independently of E.
Eigen::MatrixXd e_tilde(const SymplecticFactorization& f);

// Max-norm residuals of the factorization identities.
double symplectic_residual(const SymplecticFactorization& f);                               // S^T J S - J
double diagonalization_residual(const SymplecticFactorization& f, const QuadraticBlocks& q);  // S^T M S - 1/2 diag(E~, E~)
double segal_residual(const SymplecticFactorization& f, const QuadraticBlocks& q);        // 1/2 theta^H K theta - M
double isospectral_residual(const SymplecticFactorization& f);  // max relative gap of sorted spectra of A and B

struct BosonSpectrum {
  Vec3 k;
  std::vector<double> lambdas;      // sorted eigenvalues of A
  std::vector<double> frequencies;  // sqrt(lambdas): the e_gamma
  int multiplicity = 2;             // each frequency occurs once in A and once in B
  double shift = 0.0;               // 1/2 tr(E - D - W)
  std::optional<int> plasmon_index;

  bool empty() const { return frequencies.empty(); }
};

// Frequencies from the symmetric eigendecomposition of A; the shift uses
// tr E = tr A^1/2 + tr B^1/2 = 2 sum e_gamma.
BosonSpectrum diagonalize_mode(const QuadraticBlocks& blocks);

struct ExcitationEnergies {
  std::vector<double> energies_hbar;  // 2 kappa |k| e_gamma, in units of hbar
  double shift_hbar = 0.0;            // 2 kappa |k| shift
  std::vector<double> energies_raw;   // times hbar
  double shift_raw = 0.0;
};

ExcitationEnergies excitation_energies(const BosonSpectrum& spectrum, const ModeHamiltonian& mode, double hbar);

}  // namespace bosonize
