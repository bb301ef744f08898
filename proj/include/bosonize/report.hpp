#pragma once

// Run configuration, the subcommand drivers and their serialized outputs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bosonize/continuum_rpa.hpp"
#include "bosonize/vec3.hpp"

namespace bosonize {

struct RunConfig {
  std::optional<std::int64_t> n_particles;
  std::optional<double> k_fermi;
  int m_patches = 200;
  double delta = 0.05;
  double corridor = 0.0;  // angle on the unit sphere
  std::string potential = "coulomb";

  // |k| grid along `direction`, unless explicit lattice modes are listed.
  double k_min = 0.05;
  double k_max = 1.5;
  int k_steps = 30;
  Vec3 direction{0.36, 0.48, 0.8};
  std::vector<IntVec3> k_list;

  std::optional<double> k_cutoff;
  std::vector<int> m_sweep;  // energy: extra patch counts

  std::string model = "auto";  // spectrum: auto | equation | matrix
  double fit_lo = 0.05;
  double fit_hi = 0.3;

  // paircount
  IntVec3 pair_k{0, 0, 1};
  int patch = -1;  // -1: the patch best aligned with pair_k
  std::optional<double> radial_extension;

  // validate
  std::uint64_t seed = 20240611;
  int random_modes = 100;
  int max_ik = 50;
  double tolerance = 1e-9;

  std::string format = "csv";
  std::string out;
};

// Default particle number when neither n_particles nor k_fermi is given.
inline constexpr std::int64_t kDefaultParticles = 1000000;

// Throws InvalidArgument on the first field a module would reject.
void validate_config(const RunConfig& config);

// Canonical "key=value" lines, one per field, in a fixed order.
std::string canonical_config(const RunConfig& config);

// 64-bit FNV-1a of canonical_config, as 16 hex digits.
std::string config_hash(const RunConfig& config);

// Particle number used for the cutoff N^-delta and for hbar = N^-1/3.
double reference_particles(const RunConfig& config);

struct RunOutput {
  std::string text;
  int exit_code = 0;
  std::vector<std::string> warnings;
};

RunOutput run_spectrum(const RunConfig& config);
RunOutput run_plasmon(const RunConfig& config);
RunOutput run_energy(const RunConfig& config);
RunOutput run_paircount(const RunConfig& config);
RunOutput run_validate(const RunConfig& config);

// JSON form of an energy report and its inverse.
std::string energy_report_json(const CorrelationEnergyReport& report, const std::string& hash);
CorrelationEnergyReport energy_report_from_json(const std::string& text);

// RFC 4180 field quoting.
std::string csv_field(const std::string& value);

// Shortest round-trip decimal form.
std::string format_double(double value);

}  // namespace bosonize
