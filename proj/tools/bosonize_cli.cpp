#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bosonize/errors.hpp"
#include "bosonize/kernels.hpp"
#include "bosonize/report.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<double> numbers(const std::string& s, std::size_t count, const std::string& what) {
  auto parts = split(s, ',');
  if (parts.size() != count) throw CLI::ValidationError(what, "expected " + std::to_string(count) + " comma-separated numbers");
  std::vector<double> out;
  for (const auto& p : parts) {
    std::size_t used = 0;
    out.push_back(std::stod(p, &used));
    if (used != p.size()) throw CLI::ValidationError(what, "bad number '" + p + "'");
  }
  return out;
}

bosonize::IntVec3 int_vec(const std::string& s, const std::string& what) {
  const auto v = numbers(s, 3, what);
  bosonize::IntVec3 k{static_cast<std::int32_t>(v[0]), static_cast<std::int32_t>(v[1]), static_cast<std::int32_t>(v[2])};
  if (bosonize::Vec3(k) != bosonize::Vec3{v[0], v[1], v[2]}) throw CLI::ValidationError(what, "components must be integers");
  return k;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bosonized effective Hamiltonian of a Fermi gas: spectra, plasmon dispersion, correlation energy"};
  app.set_config("--config", "", "Flat key = value file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  bosonize::RunConfig cfg;
  std::int64_t n_particles = 0;
  double k_fermi = -1.0;
  double k_cutoff = 0.0;
  double radial_extension = -1.0;
  std::string direction, k_list, m_sweep, pair_k;

  app.add_option("--n-particles", n_particles, "Particle number N (rounded up to a full shell where needed)");
  app.add_option("--k-fermi", k_fermi, "Fermi radius in lattice units (alternative to --n-particles)");
  app.add_option("--m-patches", cfg.m_patches, "Number of patches M (even)")->capture_default_str();
  app.add_option("--delta", cfg.delta, "Cutoff exponent: patches need khat.omega >= N^-delta")->capture_default_str();
  app.add_option("--corridor", cfg.corridor, "Corridor half-width (angle on the unit sphere)")->capture_default_str();
  app.add_option("--potential", cfg.potential, "zero | coulomb | indicator:R[:V] | table:PATH")->capture_default_str();
  app.add_option("--k-min", cfg.k_min, "Smallest |k| of the grid")->capture_default_str();
  app.add_option("--k-max", cfg.k_max, "Largest |k| of the grid")->capture_default_str();
  app.add_option("--k-steps", cfg.k_steps, "Number of |k| grid points")->capture_default_str();
  app.add_option("--direction", direction, "Direction of the |k| grid, x,y,z (default 0.36,0.48,0.8)");
  app.add_option("--k-list", k_list, "Lattice modes x,y,z;x,y,z;... (replaces the |k| grid)");
  app.add_option("--k-cutoff", k_cutoff, "Largest |k| summed in energy runs (required for coulomb)");
  app.add_option("--m-sweep", m_sweep, "Extra patch counts for energy runs, comma-separated");
  app.add_option("--model", cfg.model, "Spectrum equation: auto | equation | matrix")->capture_default_str();
  app.add_option("--fit-lo", cfg.fit_lo, "Lower end of the dispersion fit window")->capture_default_str();
  app.add_option("--fit-hi", cfg.fit_hi, "Upper end of the dispersion fit window")->capture_default_str();
  app.add_option("--pair-k", pair_k, "Relative momentum for paircount, x,y,z (default 0,0,1)");
  app.add_option("--patch", cfg.patch, "Patch index for paircount (-1: best aligned)")->capture_default_str();
  app.add_option("--radial-extension", radial_extension, "Radial patch extension for paircount (default max(1,|k|))");
  app.add_option("--seed", cfg.seed, "Seed of the randomized validation modes")->capture_default_str();
  app.add_option("--random-modes", cfg.random_modes, "Randomized modes per validation family")->capture_default_str();
  app.add_option("--max-ik", cfg.max_ik, "Largest I_k of randomized modes")->capture_default_str();
  app.add_option("--tolerance", cfg.tolerance, "Residual bound of the validation checks")->capture_default_str();
  app.add_option("--format", cfg.format, "csv | json")->capture_default_str();
  app.add_option("--out", cfg.out, "Output file (default: stdout)");
  std::string isa;
  app.add_option("--isa", isa, "Force kernel variant: scalar | avx2");

  auto* spectrum = app.add_subcommand("spectrum", "Single-boson energies 2 kappa |k| e_gamma per mode");
  auto* plasmon = app.add_subcommand("plasmon", "Continuum plasmon dispersion and its quadratic fit");
  auto* energy = app.add_subcommand("energy", "Correlation energy at finite M and in the continuum");
  auto* paircount = app.add_subcommand("paircount", "Exact pair count of one patch against the interpolation formula");
  auto* validate = app.add_subcommand("validate", "Cross-module invariant checks; non-zero exit on failure");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.count("--n-particles")) cfg.n_particles = n_particles;
    if (app.count("--k-fermi")) cfg.k_fermi = k_fermi;
    if (app.count("--k-cutoff")) cfg.k_cutoff = k_cutoff;
    if (app.count("--radial-extension")) cfg.radial_extension = radial_extension;
    if (!direction.empty()) {
      const auto v = numbers(direction, 3, "--direction");
      cfg.direction = {v[0], v[1], v[2]};
    }
    for (const auto& item : split(k_list, ';')) cfg.k_list.push_back(int_vec(item, "--k-list"));
    for (const auto& item : split(m_sweep, ',')) cfg.m_sweep.push_back(std::stoi(item));
    if (!pair_k.empty()) cfg.pair_k = int_vec(pair_k, "--pair-k");
    if (isa == "scalar") bosonize::kernels::set_active_isa(bosonize::kernels::Isa::scalar);
    else if (isa == "avx2") bosonize::kernels::set_active_isa(bosonize::kernels::Isa::avx2);
    else if (!isa.empty()) throw bosonize::InvalidArgument("--isa must be scalar or avx2");

    bosonize::RunOutput result;
    if (*spectrum) result = bosonize::run_spectrum(cfg);
    else if (*plasmon) result = bosonize::run_plasmon(cfg);
    else if (*energy) result = bosonize::run_energy(cfg);
    else if (*paircount) result = bosonize::run_paircount(cfg);
    else if (*validate) result = bosonize::run_validate(cfg);

    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    if (cfg.out.empty()) {
      std::cout << result.text;
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) throw bosonize::InvalidArgument("cannot write '" + cfg.out + "'");
      file << result.text;
    }
    return result.exit_code;
  } catch (const bosonize::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
