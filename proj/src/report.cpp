#include "bosonize/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"

#include "bosonize/bogoliubov.hpp"
#include "bosonize/constants.hpp"
#include "bosonize/errors.hpp"
#include "bosonize/lattice.hpp"
#include "bosonize/mode_hamiltonian.hpp"
#include "bosonize/patches.hpp"
#include "bosonize/potential.hpp"
#include "bosonize/spectral_rank_one.hpp"

namespace bosonize {

using nlohmann::json;

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

namespace {

std::string vec_text(const Vec3& v) {
  return format_double(v.x) + " " + format_double(v.y) + " " + format_double(v.z);
}

std::string ivec_text(const IntVec3& v) {
  return std::to_string(v.x) + " " + std::to_string(v.y) + " " + std::to_string(v.z);
}

DispersionModel spectrum_model(const RunConfig& c, const Potential& v) {
  if (c.model == "equation") return DispersionModel::equation;
  if (c.model == "matrix") return DispersionModel::matrix;
  return v.coulomb ? DispersionModel::equation : DispersionModel::matrix;
}

const char* model_name(DispersionModel m) { return m == DispersionModel::equation ? "equation" : "matrix"; }

// Mode momenta for spectrum-like runs: the lattice list if given, otherwise
// the |k| grid along the configured direction.
std::vector<Vec3> mode_momenta(const RunConfig& c) {
  std::vector<Vec3> out;
  if (!c.k_list.empty()) {
    for (const auto& k : c.k_list) out.emplace_back(k);
    return out;
  }
  const Vec3 dir = c.direction.normalized();
  for (int i = 0; i < c.k_steps; ++i) {
    const double k = c.k_steps == 1 ? c.k_min : c.k_min + (c.k_max - c.k_min) * i / (c.k_steps - 1);
    out.push_back(k * dir);
  }
  return out;
}

std::string header(const RunConfig& c, const std::string& command) {
  std::ostringstream os;
  os << "# bosonize " << command << "\n";
  os << "# config_hash: " << config_hash(c) << "\n";
  std::istringstream lines(canonical_config(c));
  for (std::string line; std::getline(lines, line);) os << "# " << line << "\n";
  return os.str();
}

struct Check {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::string note;
};

}  // namespace

void validate_config(const RunConfig& c) {
  if (c.n_particles && c.k_fermi) throw InvalidArgument("config: give either n_particles or k_fermi, not both");
  if (c.n_particles && *c.n_particles < 1) throw InvalidArgument("config: n_particles must be >= 1");
  if (c.k_fermi && !(*c.k_fermi >= 0.0)) throw InvalidArgument("config: k_fermi must be non-negative");
  if (c.m_patches < 2 || c.m_patches % 2 != 0) throw InvalidArgument("config: m_patches must be even and >= 2");
  for (int m : c.m_sweep) {
    if (m < 2 || m % 2 != 0) throw InvalidArgument("config: every m_sweep entry must be even and >= 2");
  }
  if (!(c.delta > 0.0)) throw InvalidArgument("config: delta must be positive");
  if (!(c.corridor >= 0.0 && c.corridor < std::numbers::pi / 2)) {
    throw InvalidArgument("config: corridor must lie in [0, pi/2)");
  }
  if (!(c.k_min > 0.0) || !(c.k_max >= c.k_min)) throw InvalidArgument("config: need 0 < k_min <= k_max");
  if (c.k_steps < 1) throw InvalidArgument("config: k_steps must be >= 1");
  if (c.direction.is_zero()) throw InvalidArgument("config: direction must be non-zero");
  for (const auto& k : c.k_list) {
    if (k.is_zero()) throw InvalidArgument("config: k_list contains the zero vector");
  }
  if (c.k_cutoff && !(*c.k_cutoff > 0.0)) throw InvalidArgument("config: k_cutoff must be positive");
  if (c.model != "auto" && c.model != "equation" && c.model != "matrix") {
    throw InvalidArgument("config: model must be auto, equation or matrix");
  }
  if (!(c.fit_hi > c.fit_lo)) throw InvalidArgument("config: fit window is empty");
  if (c.pair_k.is_zero()) throw InvalidArgument("config: pair_k must be non-zero");
  if (c.patch >= c.m_patches) throw InvalidArgument("config: patch index out of range");
  if (c.radial_extension && !(*c.radial_extension >= 0.0)) {
    throw InvalidArgument("config: radial_extension must be non-negative");
  }
  if (c.random_modes < 0) throw InvalidArgument("config: random_modes must be >= 0");
  if (c.max_ik < 1) throw InvalidArgument("config: max_ik must be >= 1");
  if (!(c.tolerance > 0.0)) throw InvalidArgument("config: tolerance must be positive");
  if (c.format != "csv" && c.format != "json") throw InvalidArgument("config: format must be csv or json");
  parse_potential(c.potential);
}

std::string canonical_config(const RunConfig& c) {
  std::ostringstream os;
  os << "n_particles=" << (c.n_particles ? std::to_string(*c.n_particles) : "") << "\n";
  os << "k_fermi=" << (c.k_fermi ? format_double(*c.k_fermi) : "") << "\n";
  os << "m_patches=" << c.m_patches << "\n";
  os << "delta=" << format_double(c.delta) << "\n";
  os << "corridor=" << format_double(c.corridor) << "\n";
  os << "potential=" << c.potential << "\n";
  os << "k_min=" << format_double(c.k_min) << "\n";
  os << "k_max=" << format_double(c.k_max) << "\n";
  os << "k_steps=" << c.k_steps << "\n";
  os << "direction=" << vec_text(c.direction) << "\n";
  os << "k_list=";
  for (std::size_t i = 0; i < c.k_list.size(); ++i) os << (i ? ";" : "") << ivec_text(c.k_list[i]);
  os << "\n";
  os << "k_cutoff=" << (c.k_cutoff ? format_double(*c.k_cutoff) : "") << "\n";
  os << "m_sweep=";
  for (std::size_t i = 0; i < c.m_sweep.size(); ++i) os << (i ? ";" : "") << c.m_sweep[i];
  os << "\n";
  os << "model=" << c.model << "\n";
  os << "fit_lo=" << format_double(c.fit_lo) << "\n";
  os << "fit_hi=" << format_double(c.fit_hi) << "\n";
  os << "pair_k=" << ivec_text(c.pair_k) << "\n";
  os << "patch=" << c.patch << "\n";
  os << "radial_extension=" << (c.radial_extension ? format_double(*c.radial_extension) : "") << "\n";
  os << "seed=" << c.seed << "\n";
  os << "random_modes=" << c.random_modes << "\n";
  os << "max_ik=" << c.max_ik << "\n";
  os << "tolerance=" << format_double(c.tolerance) << "\n";
  os << "format=" << c.format << "\n";
  return os.str();
}

std::string config_hash(const RunConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_config(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double reference_particles(const RunConfig& c) {
  if (c.n_particles) return static_cast<double>(*c.n_particles);
  if (c.k_fermi) return static_cast<double>(build_fermi_ball(BallSpec::from_radius(*c.k_fermi)).n_particles);
  return static_cast<double>(kDefaultParticles);
}

RunOutput run_spectrum(const RunConfig& c) {
  validate_config(c);
  const Potential v = parse_potential(c.potential);
  const PatchSet patches = PatchSet::partition_sphere(c.m_patches, c.corridor);
  const double n_ref = reference_particles(c);
  const double hbar = hbar_for(n_ref);
  const DispersionModel model = spectrum_model(c, v);

  json modes = json::array();
  std::ostringstream csv;
  csv << header(c, "spectrum");
  csv << "# model: " << model_name(model) << "\n";
  csv << "# energies: energy_hbar_units = 2 kappa |k| sqrt(lambda); energy_raw = hbar * energy_hbar_units, hbar = "
      << format_double(hbar) << "\n";
  csv << "k_abs,branch,lambda,energy_hbar_units,is_plasmon,energy_raw,kx,ky,kz\n";

  for (const Vec3& k : mode_momenta(c)) {
    const ModeHamiltonian mode = build_mode(k, patches, v, n_ref, c.delta);
    std::vector<double> lambdas;
    if (model == DispersionModel::equation) {
      lambdas = secular_roots(SecularProblem::coulomb_form(mode));
    } else {
      for (double l : secular_roots(SecularProblem::for_mode(mode))) {
        lambdas.push_back(l);
        lambdas.push_back(l);
      }
    }
    const double scale = 2.0 * kKappa * k.norm();
    const bool has_plasmon = mode.g > 0.0 && !lambdas.empty();
    json rows = json::array();
    for (std::size_t b = 0; b < lambdas.size(); ++b) {
      // the matrix model lists each A eigenvalue twice; both copies of the top one are flagged
      const bool plasmon = has_plasmon && (b + 1 == lambdas.size() ||
                                           (model == DispersionModel::matrix && b + 2 == lambdas.size()));
      const double e = scale * std::sqrt(lambdas[b]);
      csv << format_double(k.norm()) << ',' << b << ',' << format_double(lambdas[b]) << ',' << format_double(e) << ','
          << (plasmon ? 1 : 0) << ',' << format_double(hbar * e) << ',' << format_double(k.x) << ','
          << format_double(k.y) << ',' << format_double(k.z) << '\n';
      rows.push_back({{"branch", b}, {"lambda", lambdas[b]}, {"energy_hbar_units", e}, {"is_plasmon", plasmon},
                      {"energy_raw", hbar * e}});
    }
    modes.push_back({{"k", {k.x, k.y, k.z}}, {"k_abs", k.norm()}, {"i_k", mode.i_k}, {"g", mode.g},
                     {"branches", rows}});
  }

  RunOutput out;
  if (c.format == "json") {
    json doc = {{"command", "spectrum"}, {"config_hash", config_hash(c)}, {"model", model_name(model)},
                {"hbar", hbar}, {"modes", modes}};
    out.text = doc.dump(2) + "\n";
  } else {
    out.text = csv.str();
  }
  return out;
}

RunOutput run_plasmon(const RunConfig& c) {
  validate_config(c);
  const Potential v = parse_potential(c.potential);
  if (!v.coulomb) throw InvalidArgument("plasmon: the dispersion equation is defined for the coulomb potential");
  const DispersionModel model = c.model == "matrix" ? DispersionModel::matrix : DispersionModel::equation;
  const double n_ref = reference_particles(c);
  const double hbar = hbar_for(n_ref);
  const PlasmonCurve curve = plasmon_curve(c.k_min, c.k_max, c.k_steps, c.fit_lo, c.fit_hi, model);
  const PatchSet patches = PatchSet::partition_sphere(c.m_patches, c.corridor);
  const Vec3 dir = c.direction.normalized();

  std::vector<double> finite;
  for (const auto& s : curve.samples) {
    const ModeHamiltonian mode = build_mode(s.k_abs * dir, patches, v, n_ref, c.delta);
    const SecularProblem p = model == DispersionModel::equation ? SecularProblem::coulomb_form(mode)
                                                                : SecularProblem::for_mode(mode);
    finite.push_back(p.poles.empty() ? std::nan("") : 2.0 * kKappa * s.k_abs * std::sqrt(plasmon_root(p)));
  }

  RunOutput out;
  if (c.format == "json") {
    json samples = json::array();
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
      const auto& s = curve.samples[i];
      samples.push_back({{"k_abs", s.k_abs}, {"lambda", s.lambda}, {"energy_hbar_units", s.energy_hbar},
                         {"series_hbar_units", plasmon_series(s.k_abs, 1.0)},
                         {"energy_finite_m_hbar_units", finite[i]}, {"energy_raw", hbar * s.energy_hbar}});
    }
    json doc = {{"command", "plasmon"},
                {"config_hash", config_hash(c)},
                {"model", model_name(model)},
                {"fit", {{"window", {curve.fit_window_lo, curve.fit_window_hi}},
                         {"points", curve.fit_points},
                         {"intercept_hbar_units", curve.intercept},
                         {"curvature_hbar_units", curve.curvature},
                         {"series_intercept", 2.0},
                         {"series_curvature", plasmon_coefficient()}}},
                {"samples", samples}};
    out.text = doc.dump(2) + "\n";
    return out;
  }
  std::ostringstream csv;
  csv << header(c, "plasmon");
  csv << "# model: " << model_name(model) << "\n";
  csv << "# fit window: [" << format_double(curve.fit_window_lo) << ", " << format_double(curve.fit_window_hi)
      << "] points: " << curve.fit_points << "\n";
  csv << "# fit intercept (hbar units): " << format_double(curve.intercept) << " series: 2\n";
  csv << "# fit curvature (hbar units): " << format_double(curve.curvature)
      << " series: " << format_double(plasmon_coefficient()) << "\n";
  csv << "k_abs,lambda,energy_hbar_units,series_hbar_units,energy_finite_m_hbar_units,energy_raw\n";
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const auto& s = curve.samples[i];
    csv << format_double(s.k_abs) << ',' << format_double(s.lambda) << ',' << format_double(s.energy_hbar) << ','
        << format_double(plasmon_series(s.k_abs, 1.0)) << ',' << format_double(finite[i]) << ','
        << format_double(hbar * s.energy_hbar) << '\n';
  }
  out.text = csv.str();
  return out;
}

std::string energy_report_json(const CorrelationEnergyReport& r, const std::string& hash) {
  json modes = json::array();
  for (const auto& m : r.per_mode) {
    json entry = {{"k", {m.k.x, m.k.y, m.k.z}}, {"v_hat", m.v_hat}, {"i_k", m.i_k},
                  {"shift_continuum", m.shift_continuum}};
    entry["shift_finite_m"] = m.shift_finite_m ? json(*m.shift_finite_m) : json(nullptr);
    modes.push_back(entry);
  }
  json doc = {{"command", "energy"},
              {"config_hash", hash},
              {"potential", r.potential_id},
              {"formal", r.formal},
              {"m_patches", r.m_patches},
              {"delta", r.delta},
              {"n_ref", r.n_ref},
              {"hbar", r.hbar},
              {"k_range", r.k_range},
              {"units", "totals in units of hbar; *_raw multiplied by hbar"},
              {"total_continuum", r.total_continuum},
              {"total_continuum_raw", r.total_continuum * r.hbar},
              {"per_mode", modes}};
  doc["total_finite_m"] = r.total_finite_m ? json(*r.total_finite_m) : json(nullptr);
  doc["total_finite_m_raw"] = r.total_finite_m ? json(*r.total_finite_m * r.hbar) : json(nullptr);
  doc["relative_gap"] = r.relative_gap ? json(*r.relative_gap) : json(nullptr);
  return doc.dump(2) + "\n";
}

CorrelationEnergyReport energy_report_from_json(const std::string& text) {
  const json doc = json::parse(text);
  CorrelationEnergyReport r;
  r.potential_id = doc.at("potential").get<std::string>();
  r.formal = doc.at("formal").get<bool>();
  r.m_patches = doc.at("m_patches").get<int>();
  r.delta = doc.at("delta").get<double>();
  r.n_ref = doc.at("n_ref").get<double>();
  r.hbar = doc.at("hbar").get<double>();
  r.k_range = doc.at("k_range").get<double>();
  r.total_continuum = doc.at("total_continuum").get<double>();
  if (!doc.at("total_finite_m").is_null()) r.total_finite_m = doc.at("total_finite_m").get<double>();
  if (!doc.at("relative_gap").is_null()) r.relative_gap = doc.at("relative_gap").get<double>();
  for (const auto& e : doc.at("per_mode")) {
    ModeEnergy m;
    const auto& k = e.at("k");
    m.k = {k.at(0).get<std::int32_t>(), k.at(1).get<std::int32_t>(), k.at(2).get<std::int32_t>()};
    m.v_hat = e.at("v_hat").get<double>();
    m.i_k = e.at("i_k").get<int>();
    m.shift_continuum = e.at("shift_continuum").get<double>();
    if (!e.at("shift_finite_m").is_null()) m.shift_finite_m = e.at("shift_finite_m").get<double>();
    r.per_mode.push_back(m);
  }
  return r;
}

RunOutput run_energy(const RunConfig& c) {
  validate_config(c);
  const Potential v = parse_potential(c.potential);
  const PatchSet patches = PatchSet::partition_sphere(c.m_patches, c.corridor);
  EnergyOptions opt;
  opt.k_cutoff = c.k_cutoff;
  opt.patches = &patches;
  opt.n_ref = reference_particles(c);
  opt.delta = c.delta;
  const CorrelationEnergyReport report = total_energy(v, opt);

  RunOutput out;
  if (report.formal) out.warnings.push_back("coulomb totals are formal: the mode sum is truncated at k_cutoff");
  std::vector<std::pair<int, CorrelationEnergyReport>> sweep;
  for (int m : c.m_sweep) {
    const PatchSet ps = PatchSet::partition_sphere(m, c.corridor);
    EnergyOptions o = opt;
    o.patches = &ps;
    sweep.emplace_back(m, total_energy(v, o));
  }

  if (c.format == "json") {
    json doc = json::parse(energy_report_json(report, config_hash(c)));
    json rows = json::array();
    for (const auto& [m, r] : sweep) {
      rows.push_back({{"m_patches", m}, {"total_finite_m", *r.total_finite_m},
                      {"relative_gap", r.relative_gap ? json(*r.relative_gap) : json(nullptr)}});
    }
    doc["m_sweep"] = rows;
    out.text = doc.dump(2) + "\n";
    return out;
  }
  std::ostringstream csv;
  csv << header(c, "energy");
  csv << "# potential: " << report.potential_id << (report.formal ? " (formal: truncated at k_cutoff)" : "") << "\n";
  csv << "# units: shifts dimensionless; totals in units of hbar = " << format_double(report.hbar) << "\n";
  csv << "# total_continuum: " << format_double(report.total_continuum) << "\n";
  if (report.total_finite_m) csv << "# total_finite_m: " << format_double(*report.total_finite_m) << "\n";
  if (report.relative_gap) csv << "# relative_gap: " << format_double(*report.relative_gap) << "\n";
  for (const auto& [m, r] : sweep) {
    csv << "# m_sweep " << m << ": total_finite_m=" << format_double(*r.total_finite_m)
        << " relative_gap=" << (r.relative_gap ? format_double(*r.relative_gap) : "") << "\n";
  }
  csv << "kx,ky,kz,k_abs,v_hat,i_k,shift_finite_m,shift_continuum,relative_gap\n";
  for (const auto& m : report.per_mode) {
    const double gap = m.shift_continuum != 0.0 && m.shift_finite_m
                           ? std::fabs(*m.shift_finite_m - m.shift_continuum) / std::fabs(m.shift_continuum)
                           : 0.0;
    csv << m.k.x << ',' << m.k.y << ',' << m.k.z << ',' << format_double(Vec3(m.k).norm()) << ','
        << format_double(m.v_hat) << ',' << m.i_k << ','
        << (m.shift_finite_m ? format_double(*m.shift_finite_m) : "") << ',' << format_double(m.shift_continuum)
        << ',' << format_double(gap) << '\n';
  }
  out.text = csv.str();
  return out;
}

RunOutput run_paircount(const RunConfig& c) {
  validate_config(c);
  const FermiBall ball = c.k_fermi ? build_fermi_ball(BallSpec::from_radius(*c.k_fermi))
                                   : build_fermi_ball(BallSpec::from_particles(c.n_particles.value_or(100000)));
  RunOutput out;
  if (ball.rounded_up()) {
    out.warnings.push_back("requested N=" + std::to_string(*ball.requested_n) + " falls inside a shell; using N=" +
                           std::to_string(ball.n_particles));
  }
  const double corridor = c.corridor;
  const PatchSet patches = PatchSet::partition_sphere(c.m_patches, corridor);
  const Vec3 k(c.pair_k);
  int alpha = c.patch;
  if (alpha < 0) {
    alpha = 0;
    for (int a = 1; a < patches.size(); ++a) {
      if (k.dot(patches.centers()[a]) > k.dot(patches.centers()[alpha])) alpha = a;
    }
  }
  const double exact = std::pow(normalization_exact(patches, alpha, c.pair_k, ball, c.radial_extension), 2);
  const double approx = std::pow(normalization_approx(patches, alpha, k, static_cast<double>(ball.n_particles)), 2);
  const double cos_a = k.normalized().dot(patches.centers()[alpha]);
  const double rel = approx > 0.0 ? std::fabs(exact - approx) / approx : 0.0;

  if (c.format == "json") {
    json doc = {{"command", "paircount"},    {"config_hash", config_hash(c)},
                {"n_particles", ball.n_particles}, {"k_fermi", ball.k_fermi},
                {"m_patches", patches.size()}, {"alpha", alpha},
                {"k", {c.pair_k.x, c.pair_k.y, c.pair_k.z}}, {"khat_dot_omega", cos_a},
                {"n2_exact", exact},           {"n2_approx", approx},
                {"relative_error", rel},       {"ratio", approx > 0 ? exact / approx : 0.0}};
    out.text = doc.dump(2) + "\n";
    return out;
  }
  std::ostringstream csv;
  csv << header(c, "paircount");
  csv << "n_particles,k_fermi,m_patches,alpha,kx,ky,kz,khat_dot_omega,n2_exact,n2_approx,relative_error,ratio\n";
  csv << ball.n_particles << ',' << format_double(ball.k_fermi) << ',' << patches.size() << ',' << alpha << ','
      << c.pair_k.x << ',' << c.pair_k.y << ',' << c.pair_k.z << ',' << format_double(cos_a) << ','
      << format_double(exact) << ',' << format_double(approx) << ',' << format_double(rel) << ','
      << format_double(approx > 0 ? exact / approx : 0.0) << '\n';
  out.text = csv.str();
  return out;
}

RunOutput run_validate(const RunConfig& c) {
  validate_config(c);
  RunOutput out;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double tol = c.tolerance;

  std::vector<Check> checks;
  auto add = [&](std::string name, double measured, double bound, bool lower_is_pass = true) {
    Check ch{std::move(name), measured, bound, lower_is_pass ? measured <= bound : measured >= bound, ""};
    checks.push_back(ch);
  };

  // Randomized synthetic modes; one in four gets repeated u values.
  double free_err = 0.0, oracle_err = 0.0, iso_err = 0.0, sympl_err = 0.0, diag_err = 0.0, segal_err = 0.0;
  double worst_shift = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < c.random_modes; ++i) {
    const int n = 1 + static_cast<int>(unit(rng) * c.max_ik) % c.max_ik;
    std::vector<double> u(static_cast<std::size_t>(n));
    for (auto& x : u) x = 0.3 + 0.7 * unit(rng);
    if (i % 4 == 3 && n > 1) u[n - 1] = u[0];
    const double g = 2.0 * unit(rng);

    const QuadraticBlocks free_q = assemble_blocks(make_mode(u, 0.0));
    const BosonSpectrum free_s = diagonalize_mode(free_q);
    std::vector<double> u2;
    for (double x : u) u2.push_back(x * x);
    std::sort(u2.begin(), u2.end());
    for (int j = 0; j < n; ++j) free_err = std::max(free_err, std::fabs(free_s.frequencies[j] - u2[j]));
    free_err = std::max(free_err, std::fabs(free_s.shift));

    const ModeHamiltonian mode = make_mode(u, g);
    const QuadraticBlocks q = assemble_blocks(mode);
    const BosonSpectrum s = diagonalize_mode(q);
    const auto roots = secular_roots(SecularProblem::for_mode(mode));
    for (int j = 0; j < n; ++j) {
      oracle_err = std::max(oracle_err, std::fabs(roots[j] - s.lambdas[j]) / std::max(s.lambdas[j], 1e-300));
    }
    worst_shift = std::max(worst_shift, s.shift);
    const SymplecticFactorization f = build_factorization(q);
    iso_err = std::max(iso_err, isospectral_residual(f));
    sympl_err = std::max(sympl_err, symplectic_residual(f));
    diag_err = std::max(diag_err, diagonalization_residual(f, q));
    segal_err = std::max(segal_err, segal_residual(f, q));
  }

  // Randomized Coulomb modes from actual patch sets.
  int interlacing_failures = 0;
  const Potential coulomb = coulomb_potential();
  for (int i = 0; i < c.random_modes; ++i) {
    int m = 2 * (5 + static_cast<int>(unit(rng) * 46));
    IntVec3 k{0, 0, 0};
    while (k.is_zero()) {
      k = {static_cast<std::int32_t>(unit(rng) * 7) - 3, static_cast<std::int32_t>(unit(rng) * 7) - 3,
           static_cast<std::int32_t>(unit(rng) * 7) - 3};
    }
    const PatchSet patches = PatchSet::partition_sphere(m);
    const ModeHamiltonian mode = build_mode(Vec3(k), patches, coulomb, 1e6, c.delta);
    if (mode.degenerate) continue;
    for (const SecularProblem& p : {SecularProblem::for_mode(mode), SecularProblem::coulomb_form(mode)}) {
      if (!check_interlacing(p, secular_roots(p)).ok) ++interlacing_failures;
    }
  }

  if (c.random_modes == 0) {
    out.warnings.push_back("random_modes = 0: randomized checks pass vacuously");
  }
  add("free_theory_exact", free_err, 1e-12);
  add("secular_vs_dense", oracle_err, tol);
  add("isospectral_a_b", iso_err, tol);
  add("symplectic_form", sympl_err, tol);
  add("block_diagonalization", diag_err, tol);
  add("segal_fields", segal_err, tol);
  add("shift_non_positive", c.random_modes == 0 ? 0.0 : std::max(0.0, worst_shift), 0.0);
  add("interlacing_failures", interlacing_failures, 0.0);

  const PatchSet fine = PatchSet::partition_sphere(10000);
  const double riemann = riemann_average(fine, c.direction, [](double x) { return x * x / (2.0 - x * x); });
  add("continuum_riemann_sum", std::fabs(riemann - continuum_lhs(2.0)), 1e-3);
  add("f_integral_pi_over_4", std::fabs(rpa_f_integral() - std::numbers::pi / 4), 1e-8);
  const RpaComparison cmp = rpa_comparison(reference_particles(c));
  add("rpa_identity", std::fabs(cmp.series_side - cmp.textbook_side) / cmp.textbook_side, 1e-12);

  bool all = true;
  for (const auto& ch : checks) all = all && ch.pass;
  out.exit_code = all ? 0 : 1;

  if (c.format == "json") {
    json rows = json::array();
    for (const auto& ch : checks) {
      rows.push_back({{"name", ch.name}, {"measured", ch.measured}, {"bound", ch.bound}, {"pass", ch.pass}});
    }
    json doc = {{"command", "validate"}, {"config_hash", config_hash(c)}, {"checks", rows}, {"pass", all},
                {"warnings", out.warnings}};
    out.text = doc.dump(2) + "\n";
    return out;
  }
  std::ostringstream csv;
  csv << header(c, "validate");
  for (const auto& w : out.warnings) csv << "# warning: " << w << "\n";
  csv << "check,measured,bound,status\n";
  for (const auto& ch : checks) {
    csv << ch.name << ',' << format_double(ch.measured) << ',' << format_double(ch.bound) << ','
        << (ch.pass ? "PASS" : "FAIL") << '\n';
  }
  out.text = csv.str();
  return out;
}

}  // namespace bosonize
