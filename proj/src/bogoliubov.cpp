#include "bosonize/bogoliubov.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "bosonize/constants.hpp"
#include "bosonize/errors.hpp"

namespace bosonize {

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigh(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver did not converge");
  return es;
}

template <class F>
Eigen::MatrixXd apply_spectral(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& es, F f) {
  const Eigen::VectorXd mapped = es.eigenvalues().unaryExpr(f);
  return es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().transpose();
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return {};
  const Eigen::VectorXd ev = eigh(m).eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("sqrt_psd: matrix is not square");
  if (m.rows() == 0) return m;
  const auto es = eigh(m);
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  const double lowest = es.eigenvalues().minCoeff();
  if (lowest < -1e-10 * scale) {
    std::ostringstream msg;
    msg << "sqrt_psd: eigenvalue " << lowest << " below tolerated rounding " << -1e-10 * scale;
    throw NotPositiveSemidefinite(msg.str());
  }
  return apply_spectral(es, [](double x) { return std::sqrt(std::max(0.0, x)); });
}

Eigen::MatrixXd inverse_sqrt_pd(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() == 0) return m;
  const auto es = eigh(m);
  const double hi = es.eigenvalues().maxCoeff();
  const double lo = es.eigenvalues().minCoeff();
  if (!(lo > 0.0) || hi / lo > 1e14) {
    std::ostringstream msg;
    msg << what << " is not safely positive definite (eigenvalues in [" << lo << ", " << hi << "])";
    throw IllConditioned(msg.str());
  }
  return apply_spectral(es, [](double x) { return 1.0 / std::sqrt(x); });
}

Eigen::MatrixXd symplectic_form(Eigen::Index n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  return j;
}

SymplecticFactorization build_factorization(const QuadraticBlocks& q) {
  const Eigen::Index n = q.i_k();
  const Eigen::Index m = 2 * n;
  SymplecticFactorization f;

  const Eigen::MatrixXd minus = q.D + q.W - q.W_tilde;
  const Eigen::MatrixXd plus = q.D + q.W + q.W_tilde;
  const Eigen::MatrixXd minus_inv_half = inverse_sqrt_pd(minus, "D+W-W~");
  inverse_sqrt_pd(plus, "D+W+W~");  // conditioning check only
  const Eigen::MatrixXd minus_half = sqrt_psd(minus);

  f.E = sqrt_psd(minus_half * plus * minus_half);
  f.E = 0.5 * (f.E + f.E.transpose());
  const auto es_e = eigh(f.E);
  if (m > 0 && es_e.eigenvalues().maxCoeff() / es_e.eigenvalues().minCoeff() > 1e14) {
    throw IllConditioned("E is ill-conditioned");
  }
  const Eigen::MatrixXd e_half = apply_spectral(es_e, [](double x) { return std::sqrt(x); });
  const Eigen::MatrixXd e_inv_half = apply_spectral(es_e, [](double x) { return 1.0 / std::sqrt(x); });

  const double r = 1.0 / std::sqrt(2.0);
  f.U = Eigen::MatrixXd::Zero(m, m);
  f.U.topLeftCorner(n, n) = r * Eigen::MatrixXd::Identity(n, n);
  f.U.topRightCorner(n, n) = r * Eigen::MatrixXd::Identity(n, n);
  f.U.bottomLeftCorner(n, n) = r * Eigen::MatrixXd::Identity(n, n);
  f.U.bottomRightCorner(n, n) = -r * Eigen::MatrixXd::Identity(n, n);

  f.S = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  f.S.topLeftCorner(m, m) = minus_half * e_inv_half * f.U;
  f.S.bottomRightCorner(m, m) = minus_inv_half * e_half * f.U;

  using C = std::complex<double>;
  f.theta = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m, m);
  f.theta.topLeftCorner(m, m) = r * id;
  f.theta.topRightCorner(m, m) = C(0.0, r) * id;
  f.theta.bottomLeftCorner(m, m) = r * id;
  f.theta.bottomRightCorner(m, m) = C(0.0, -r) * id;

  const Eigen::MatrixXd d_half = q.d.diagonal().cwiseSqrt().asDiagonal();
  const Eigen::MatrixXd d_plus = q.d + 2.0 * q.b;
  f.a_matrix = d_half * d_plus * d_half;
  const Eigen::MatrixXd d_plus_half = sqrt_psd(d_plus);
  f.b_matrix = d_plus_half * q.d * d_plus_half;
  return f;
}

Eigen::MatrixXd e_tilde(const SymplecticFactorization& f) {
  const Eigen::Index n = f.a_matrix.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = sqrt_psd(f.a_matrix);
  out.bottomRightCorner(n, n) = sqrt_psd(0.5 * (f.b_matrix + f.b_matrix.transpose()));
  return out;
}

double symplectic_residual(const SymplecticFactorization& f) {
  const Eigen::MatrixXd j = symplectic_form(f.S.rows() / 2);
  return max_abs(f.S.transpose() * j * f.S - j);
}

double diagonalization_residual(const SymplecticFactorization& f, const QuadraticBlocks& q) {
  const Eigen::MatrixXd et = e_tilde(f);
  const Eigen::Index m = et.rows();
  Eigen::MatrixXd target = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  target.topLeftCorner(m, m) = 0.5 * et;
  target.bottomRightCorner(m, m) = 0.5 * et;
  return max_abs(f.S.transpose() * assemble_grand_matrix(q) * f.S - target);
}

double segal_residual(const SymplecticFactorization& f, const QuadraticBlocks& q) {
  const Eigen::Index m = q.D.rows();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  k.topLeftCorner(m, m) = q.D + q.W;
  k.bottomRightCorner(m, m) = q.D + q.W;
  k.topRightCorner(m, m) = q.W_tilde;
  k.bottomLeftCorner(m, m) = q.W_tilde;
  const Eigen::MatrixXcd form = 0.5 * f.theta.adjoint() * k.cast<std::complex<double>>() * f.theta;
  const Eigen::MatrixXcd diff = form - assemble_grand_matrix(q).cast<std::complex<double>>();
  return diff.size() == 0 ? 0.0 : diff.cwiseAbs().maxCoeff();
}

double isospectral_residual(const SymplecticFactorization& f) {
  const auto a = sorted_eigenvalues(f.a_matrix);
  const auto b = sorted_eigenvalues(0.5 * (f.b_matrix + f.b_matrix.transpose()));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::fabs(a[i] - b[i]) / std::max(std::fabs(a[i]), 1e-300));
  }
  return worst;
}

BosonSpectrum diagonalize_mode(const QuadraticBlocks& q) {
  BosonSpectrum s;
  s.k = q.k;
  const Eigen::Index n = q.i_k();
  if (n == 0) return s;

  const Eigen::VectorXd u2 = q.u.array().square();
  if (u2.minCoeff() <= 0.0) throw IllConditioned("D+W-W~ is singular (zero u entry)");
  Eigen::MatrixXd a = Eigen::MatrixXd(u2.array().square().matrix().asDiagonal());
  a.noalias() += 2.0 * q.g * u2 * u2.transpose();
  s.lambdas = sorted_eigenvalues(a);

  double tr_root = 0.0;
  for (double& l : s.lambdas) {
    l = std::max(l, 0.0);
    s.frequencies.push_back(std::sqrt(l));
    tr_root += s.frequencies.back();
  }
  const double tr_d = u2.sum();
  const double tr_b = q.g * u2.sum();
  // 1/2 (2 tr A^1/2 - 2 tr d - 2 tr b)
  s.shift = q.g == 0.0 ? 0.0 : tr_root - tr_d - tr_b;
  if (q.g > 0.0) s.plasmon_index = static_cast<int>(n - 1);
  return s;
}

ExcitationEnergies excitation_energies(const BosonSpectrum& spectrum, const ModeHamiltonian& mode, double hbar) {
  ExcitationEnergies out;
  const double scale = 2.0 * kKappa * mode.k.norm();
  for (double e : spectrum.frequencies) {
    out.energies_hbar.push_back(scale * e);
    out.energies_raw.push_back(hbar * scale * e);
  }
  out.shift_hbar = scale * spectrum.shift;
  out.shift_raw = hbar * out.shift_hbar;
  return out;
}

}  // namespace bosonize
