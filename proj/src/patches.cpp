#include "bosonize/patches.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "bosonize/errors.hpp"
#include "bosonize/quadrature.hpp"

namespace bosonize {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Zones of an equal-area partition of the closed northern hemisphere into n
// regions: a polar cap followed by collars whose region counts come from
// rounding the ideal (area / region area) with carry, so the counts sum to n.
// Fewer than four regions are cut as longitude wedges from pole to equator.
std::vector<PatchZone> hemisphere_zones(int n) {
  std::vector<PatchZone> zones;
  if (n < 4) {
    zones.push_back({0.0, kPi / 2, 0.0, 1.0, 0, n, 0.0});
    return zones;
  }

  const double region_area = kTwoPi / n;
  const double z_cap = 1.0 - 1.0 / n;
  const double theta_cap = std::acos(z_cap);
  zones.push_back({0.0, theta_cap, z_cap, 1.0, 0, 1, 0.0});

  const double span = kPi / 2 - theta_cap;
  const int n_collars = std::max(1, static_cast<int>(std::lround(span / std::sqrt(region_area))));
  const double step = span / n_collars;

  std::vector<int> counts;
  double carry = 0.0;
  int assigned = 0;
  for (int i = 0; i < n_collars; ++i) {
    const double t1 = theta_cap + i * step;
    const double t2 = theta_cap + (i + 1) * step;
    const double ideal = kTwoPi * (std::cos(t1) - std::cos(t2)) / region_area;
    int r = (i + 1 == n_collars) ? (n - 1 - assigned) : static_cast<int>(std::lround(ideal + carry));
    carry += ideal - r;
    counts.push_back(r);
    assigned += r;
  }

  double z_top = z_cap;
  int first = 1;
  for (int i = 0; i < n_collars; ++i) {
    if (counts[i] < 1) throw NumericalFailure("partition_sphere: empty collar for n=" + std::to_string(n));
    const bool last = i + 1 == n_collars;
    const double z_bottom = last ? 0.0 : z_top - static_cast<double>(counts[i]) / n;
    PatchZone zone;
    zone.z_hi = z_top;
    zone.z_lo = z_bottom;
    zone.theta_lo = std::acos(z_top);
    zone.theta_hi = last ? kPi / 2 : std::acos(z_bottom);
    zone.first = first;
    zone.count = counts[i];
    zone.phi_offset = (i % 2 == 1) ? 0.5 * kTwoPi / counts[i] : 0.0;
    zones.push_back(zone);
    first += counts[i];
    z_top = z_bottom;
  }
  return zones;
}

// Normalized area centroid of the sector j of a zone.
Vec3 sector_centroid(const PatchZone& zone, int j) {
  if (zone.count == 1) return {0.0, 0.0, 1.0};
  const double w = zone.sector_width();
  const double p1 = zone.phi_offset + j * w;
  const double p2 = p1 + w;
  const double t1 = zone.theta_lo;
  const double t2 = zone.theta_hi;
  const double sin2 = (t2 / 2 - std::sin(2 * t2) / 4) - (t1 / 2 - std::sin(2 * t1) / 4);
  const Vec3 c{(std::sin(p2) - std::sin(p1)) * sin2, (std::cos(p1) - std::cos(p2)) * sin2,
               w * (std::sin(t2) * std::sin(t2) - std::sin(t1) * std::sin(t1)) / 2};
  return c.normalized();
}

double sector_area(const PatchZone& zone, double corridor) {
  const double w = zone.sector_width();
  if (corridor <= 0.0) return w * (zone.z_hi - zone.z_lo);

  const double lo = zone.theta_lo > 0.0 ? zone.theta_lo + corridor : 0.0;
  const double hi = zone.theta_hi - corridor;
  if (hi <= lo) return 0.0;
  if (zone.count == 1) return kTwoPi * (std::cos(lo) - std::cos(hi));

  const double sin_c = std::sin(corridor);
  auto width = [&](double theta) {
    const double s = std::sin(theta);
    if (s <= sin_c) return 0.0;
    return std::max(0.0, w - 2.0 * std::asin(sin_c / s));
  };
  // The integrand has a kink where the meridian corridors close off.
  const double kink = std::asin(std::min(1.0, sin_c / std::sin(w / 2)));
  auto integrand = [&](double theta) { return std::sin(theta) * width(theta); };
  double area = 0.0;
  const double split = std::clamp(kink, lo, hi);
  area += integrate_adaptive(integrand, lo, split, 1e-14, 1e-12).value;
  area += integrate_adaptive(integrand, split, hi, 1e-14, 1e-12).value;
  return area;
}

}  // namespace

double PatchZone::sector_width() const { return kTwoPi / count; }

PatchSet PatchSet::partition_sphere(int m_patches, double corridor_half_width) {
  if (m_patches < 2 || m_patches % 2 != 0) {
    throw InvalidArgument("partition_sphere: patch count must be even and >= 2 (got " + std::to_string(m_patches) +
                          "); antipodal pairing needs an even count");
  }
  if (!(corridor_half_width >= 0.0) || corridor_half_width >= kPi / 2) {
    throw InvalidArgument("partition_sphere: corridor half-width must lie in [0, pi/2)");
  }

  PatchSet set;
  set.corridor_ = corridor_half_width;
  const int n = m_patches / 2;
  set.zones_ = hemisphere_zones(n);

  set.centers_.resize(static_cast<std::size_t>(m_patches));
  set.areas_.resize(static_cast<std::size_t>(m_patches));
  for (const auto& zone : set.zones_) {
    const double area = sector_area(zone, corridor_half_width);
    for (int j = 0; j < zone.count; ++j) {
      const int alpha = zone.first + j;
      const Vec3 c = sector_centroid(zone, j);
      set.centers_[alpha] = c;
      set.centers_[alpha + n] = -c;
      set.areas_[alpha] = area;
      set.areas_[alpha + n] = area;
    }
  }
  for (const auto& c : set.centers_) {
    set.cx_.push_back(c.x);
    set.cy_.push_back(c.y);
    set.cz_.push_back(c.z);
  }
  return set;
}

PatchSet::NorthHit PatchSet::locate_north(const Vec3& v) const {
  const double rho = std::hypot(v.x, v.y);
  const double z = v.z / std::hypot(rho, v.z);
  std::size_t zi = 0;
  while (zi + 1 < zones_.size() && z < zones_[zi].z_lo) ++zi;
  const PatchZone& zone = zones_[zi];

  int j = 0;
  double dphi = 0.0;
  const double w = zone.sector_width();
  if (zone.count > 1) {
    double phi = std::atan2(v.y, v.x);
    if (phi < 0.0) phi += kTwoPi;
    double rel = std::fmod(phi - zone.phi_offset + 2 * kTwoPi, kTwoPi);
    j = std::min(zone.count - 1, static_cast<int>(rel / w));
    dphi = rel - j * w;
  }

  bool corridor = false;
  if (corridor_ > 0.0) {
    const double theta = std::atan2(rho, v.z);
    if (zone.theta_lo > 0.0 && theta - zone.theta_lo < corridor_) corridor = true;
    if (zone.theta_hi - theta < corridor_) corridor = true;
    if (zone.count > 1) {
      const double near = std::min(dphi, w - dphi);
      const double dist = std::asin(std::min(1.0, std::sin(theta) * std::sin(std::min(near, kPi / 2))));
      if (dist < corridor_) corridor = true;
    }
  }
  return {zone.first + j, corridor};
}

std::optional<int> PatchSet::locate(const Vec3& d) const {
  if (d.is_zero()) return std::nullopt;
  bool north = d.z > 0.0;
  if (d.z == 0.0) north = d.y > 0.0 || (d.y == 0.0 && d.x > 0.0);
  const NorthHit hit = north ? locate_north(d) : locate_north(-d);
  if (hit.in_corridor) return std::nullopt;
  return north ? hit.patch : hit.patch + half();
}

void PatchSet::write_text(std::ostream& os) const {
  auto num = [](double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  os << "# bosonize patch set\n";
  os << "# m_patches=" << size() << " corridor_half_width=" << num(corridor_) << '\n';
  os << "# index center_x center_y center_z area\n";
  for (int a = 0; a < size(); ++a) {
    const auto& c = centers_[a];
    os << a << ' ' << num(c.x) << ' ' << num(c.y) << ' ' << num(c.z) << ' ' << num(areas_[a]) << '\n';
  }
}

double corridor_angle(double lattice_half_width, double k_fermi) {
  if (!(k_fermi > 0.0)) throw InvalidArgument("corridor_angle: Fermi radius must be positive");
  if (lattice_half_width < 0.0) throw InvalidArgument("corridor_angle: negative corridor width");
  return lattice_half_width / k_fermi;
}

ModeIndexSets index_sets(const PatchSet& patches, const Vec3& k, double delta, double n_ref) {
  if (k.is_zero()) throw InvalidArgument("index_sets: zero mode momentum");
  if (!(delta > 0.0)) throw InvalidArgument("index_sets: cutoff exponent delta must be positive");
  if (!(n_ref >= 1.0)) throw InvalidArgument("index_sets: reference particle number must be >= 1");

  ModeIndexSets sets;
  sets.k = k;
  sets.delta = delta;
  sets.n_ref = n_ref;
  sets.cutoff = std::pow(n_ref, -delta);

  const Vec3 khat = k.normalized();
  for (int a = 0; a < patches.size(); ++a) {
    if (khat.dot(patches.centers()[a]) >= sets.cutoff) sets.i_plus.push_back(a);
  }
  sets.i_minus.reserve(sets.i_plus.size());
  for (int a : sets.i_plus) sets.i_minus.push_back(patches.antipode(a));
  return sets;
}

bool in_half_space(const Vec3& k) {
  if (k.is_zero()) throw InvalidArgument("in_half_space: zero vector has no half-space");
  if (k.z != 0.0) return k.z > 0.0;
  if (k.y != 0.0) return k.y > 0.0;
  return k.x > 0.0;
}

bool in_half_space(const IntVec3& k) { return in_half_space(Vec3(k)); }

double normalization_approx(const PatchSet& patches, int alpha, const Vec3& k, double n_ref) {
  if (alpha < 0 || alpha >= patches.size()) throw InvalidArgument("normalization: patch index out of range");
  if (k.is_zero()) throw InvalidArgument("normalization: zero mode momentum");
  const double proj = std::fabs(k.dot(patches.centers()[alpha]));
  return std::sqrt(4.0 * kPi * std::pow(n_ref, 2.0 / 3.0) * proj / patches.size());
}

LatticePredicate patch_predicate(const PatchSet& patches, int alpha, const FermiBall& ball, double radial_extension) {
  const double inner = std::max(0.0, ball.k_fermi - radial_extension);
  const double outer = ball.k_fermi + radial_extension;
  const double inner2 = inner * inner;
  const double outer2 = outer * outer;
  return [&patches, alpha, inner2, outer2](const IntVec3& q) {
    const auto n2 = static_cast<double>(q.norm2());
    if (n2 < inner2 || n2 > outer2) return false;
    return patches.locate(Vec3(q)) == alpha;
  };
}

double normalization_exact(const PatchSet& patches, int alpha, const IntVec3& k, const FermiBall& ball,
                           std::optional<double> radial_extension) {
  if (alpha < 0 || alpha >= patches.size()) throw InvalidArgument("normalization: patch index out of range");
  const double ext = radial_extension.value_or(std::max(1.0, Vec3(k).norm()));
  const auto count = count_pairs_exact(ball, patch_predicate(patches, alpha, ball, ext), k);
  return std::sqrt(static_cast<double>(count));
}

double normalization(const PatchSet& patches, int alpha, const IntVec3& k, const FermiBall& ball,
                     NormalizationMode mode) {
  if (mode == NormalizationMode::exact) return normalization_exact(patches, alpha, k, ball);
  return normalization_approx(patches, alpha, Vec3(k), static_cast<double>(ball.n_particles));
}

}  // namespace bosonize
