#include "bosonize/mode_hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bosonize/constants.hpp"
#include "bosonize/errors.hpp"
#include "bosonize/kernels.hpp"

namespace bosonize {

ModeHamiltonian build_mode(const Vec3& k, const PatchSet& patches, const Potential& potential, double n_ref,
                           double delta) {
  if (k.is_zero()) throw InvalidArgument("build_mode: zero mode momentum");
  const double v = potential(k);
  if (!(v >= 0.0)) {
    throw InvalidArgument("build_mode: potential '" + potential.id + "' is negative (or NaN) at the mode momentum");
  }

  ModeHamiltonian mode;
  mode.k = k;
  mode.index_sets = index_sets(patches, k, delta, n_ref);
  mode.i_k = static_cast<int>(mode.index_sets.i_plus.size());
  mode.v_hat_k = v;
  mode.m_patches = patches.size();
  mode.g = kKappa * v * 2.0 * std::numbers::pi / patches.size();
  mode.degenerate = mode.i_k == 0;

  std::vector<double> proj(static_cast<std::size_t>(patches.size()));
  kernels::abs_projections(patches.center_x(), patches.center_y(), patches.center_z(), k.normalized(), proj);
  mode.u.reserve(mode.index_sets.i_plus.size());
  for (int a : mode.index_sets.i_plus) mode.u.push_back(std::sqrt(proj[a]));
  return mode;
}

ModeHamiltonian make_mode(std::vector<double> u, double g, int m_patches) {
  if (!(g >= 0.0)) throw InvalidArgument("make_mode: coupling must be non-negative");
  for (double x : u) {
    if (!(x > 0.0 && x <= 1.0)) throw InvalidArgument("make_mode: u entries must lie in (0, 1]");
  }
  ModeHamiltonian mode;
  mode.k = Vec3{0.0, 0.0, 1.0};
  mode.i_k = static_cast<int>(u.size());
  mode.u = std::move(u);
  mode.g = g;
  mode.m_patches = m_patches;
  mode.degenerate = mode.i_k == 0;
  return mode;
}

QuadraticBlocks assemble_blocks(const ModeHamiltonian& mode) {
  const int n = mode.i_k;
  QuadraticBlocks q;
  q.k = mode.k;
  q.g = mode.g;
  q.u = Eigen::Map<const Eigen::VectorXd>(mode.u.data(), n);
  q.d = q.u.array().square().matrix().asDiagonal();
  q.b = q.u * q.u.transpose();  // u_i u_j first keeps b exactly symmetric
  q.b *= mode.g;

  q.D = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  q.W = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  q.W_tilde = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  q.D.topLeftCorner(n, n) = q.d;
  q.D.bottomRightCorner(n, n) = q.d;
  q.W.topLeftCorner(n, n) = q.b;
  q.W.bottomRightCorner(n, n) = q.b;
  q.W_tilde.topRightCorner(n, n) = q.b;
  q.W_tilde.bottomLeftCorner(n, n) = q.b;
  return q;
}

Eigen::MatrixXd assemble_grand_matrix(const QuadraticBlocks& q) {
  const Eigen::Index m = q.D.rows();
  Eigen::MatrixXd grand = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  grand.topLeftCorner(m, m) = 0.5 * (q.D + q.W + q.W_tilde);
  grand.bottomRightCorner(m, m) = 0.5 * (q.D + q.W - q.W_tilde);
  return grand;
}

}  // namespace bosonize
