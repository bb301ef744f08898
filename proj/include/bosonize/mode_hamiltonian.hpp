#pragma once

// Per-mode data of the effective Hamiltonian h_eff(k): the index sets, the
// vector u_alpha = sqrt|khat . omega_alpha|, the coupling g = kappa V(k) 2pi / M,
// and the coefficient matrices built from them.

#include <vector>

#include <Eigen/Dense>

#include "bosonize/patches.hpp"
#include "bosonize/potential.hpp"
#include "bosonize/vec3.hpp"

namespace bosonize {

struct ModeHamiltonian {
  Vec3 k;
  ModeIndexSets index_sets;
  int i_k = 0;             // |i_plus|; the mode carries 2 i_k bosons
  std::vector<double> u;   // u[j] belongs to i_plus[j] and, mirrored, to i_minus[j]
  double g = 0.0;
  double v_hat_k = 0.0;
  int m_patches = 0;
  bool degenerate = false;  // i_k == 0: every patch was cut off
};

ModeHamiltonian build_mode(const Vec3& k, const PatchSet& patches, const Potential& potential, double n_ref,
                           double delta);

// Mode with prescribed u and g and no geometry attached (randomized checks,
// worked examples). u entries must lie in (0, 1].
ModeHamiltonian make_mode(std::vector<double> u, double g, int m_patches = 0);

// Blocks in the reordered basis: indices 0..I-1 are i_plus, I..2I-1 are i_minus.
struct QuadraticBlocks {
  Vec3 k;
  double g = 0.0;
  Eigen::VectorXd u;
  Eigen::MatrixXd d;        // diag(u^2), I x I
  Eigen::MatrixXd b;        // g u u^T, I x I
  Eigen::MatrixXd D;        // diag(d, d)
  Eigen::MatrixXd W;        // diag(b, b)
  Eigen::MatrixXd W_tilde;  // [[0, b], [b, 0]]

  int i_k() const { return static_cast<int>(u.size()); }
};

QuadraticBlocks assemble_blocks(const ModeHamiltonian& mode);

// 1/2 diag(D + W + W~, D + W - W~), the quadratic form in the (phi, pi) basis.
Eigen::MatrixXd assemble_grand_matrix(const QuadraticBlocks& blocks);

}  // namespace bosonize
