#pragma once

#include <cmath>
#include <numbers>

namespace bosonize {

// kappa = (3 / 4pi)^(1/3); the Fermi radius is kappa * N^(1/3) to leading order.
inline const double kKappa = std::cbrt(3.0 / (4.0 * std::numbers::pi));

// Effective Planck constant hbar = N^(-1/3).
inline double hbar_for(double n_particles) { return 1.0 / std::cbrt(n_particles); }

}  // namespace bosonize
