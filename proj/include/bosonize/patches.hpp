#pragma once

// Partition of the unit sphere of directions into M patches of equal area,
// built on the northern hemisphere and mirrored through the origin, plus the
// per-mode index sets and pair normalization constants that depend on it.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "bosonize/lattice.hpp"
#include "bosonize/vec3.hpp"

namespace bosonize {

// A latitude band [theta_lo, theta_hi] (colatitude, northern hemisphere)
// split into `count` equal longitude sectors starting at `phi_offset`.
struct PatchZone {
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  double z_lo = 0.0;  // cos(theta_hi)
  double z_hi = 1.0;  // cos(theta_lo)
  int first = 0;      // index of the first patch in this zone
  int count = 1;
  double phi_offset = 0.0;

  double sector_width() const;
};

class PatchSet {
public:
  // Equal-area partition into `m_patches` (even, >= 2) patches. Patches
  // 0..M/2-1 cover the closed northern hemisphere, patch alpha + M/2 is the
  // point reflection of patch alpha. `corridor_half_width` is an angle on the
  // unit sphere: directions closer than that to a patch boundary belong to no
  // patch.
  static PatchSet partition_sphere(int m_patches, double corridor_half_width = 0.0);

  int size() const { return static_cast<int>(centers_.size()); }
  int half() const { return size() / 2; }
  double corridor_half_width() const { return corridor_; }

  const std::vector<Vec3>& centers() const { return centers_; }
  const std::vector<double>& areas() const { return areas_; }
  const std::vector<PatchZone>& zones() const { return zones_; }

  // Structure-of-arrays copy of the centers for the projection kernel.
  std::span<const double> center_x() const { return cx_; }
  std::span<const double> center_y() const { return cy_; }
  std::span<const double> center_z() const { return cz_; }

  int antipode(int alpha) const { return alpha < half() ? alpha + half() : alpha - half(); }

  // Patch containing the direction, or nullopt for the zero vector and for
  // corridor directions. Directions on the equator are assigned to the north
  // when (y > 0) or (y == 0 and x > 0), to the south otherwise, so that v and
  // -v always land in antipodal patches.
  std::optional<int> locate(const Vec3& direction) const;
  bool contains(int alpha, const Vec3& direction) const { return locate(direction) == alpha; }

  // One line per patch: "index center_x center_y center_z area", after a
  // commented header. Numbers use the shortest round-trip representation.
  void write_text(std::ostream& os) const;

private:
  PatchSet() = default;

  struct NorthHit {
    int patch;
    bool in_corridor;
  };
  NorthHit locate_north(const Vec3& unit) const;

  double corridor_ = 0.0;
  std::vector<PatchZone> zones_;
  std::vector<Vec3> centers_;
  std::vector<double> areas_;
  std::vector<double> cx_, cy_, cz_;
};

// Converts a lattice-unit corridor half-width R on the Fermi sphere of radius
// k_fermi into the angle used by PatchSet.
double corridor_angle(double lattice_half_width, double k_fermi);

// Patch indices coupled to mode k: i_plus = {alpha : khat . omega_alpha >= n_ref^-delta}
// (closed boundary) and i_minus[j] = antipode(i_plus[j]), the set for -k.
struct ModeIndexSets {
  Vec3 k;
  std::vector<int> i_plus;
  std::vector<int> i_minus;
  double delta = 0.0;
  double n_ref = 0.0;
  double cutoff = 0.0;  // n_ref^-delta
};

ModeIndexSets index_sets(const PatchSet& patches, const Vec3& k, double delta, double n_ref);

// True iff k_z > 0, or k_z = 0 and k_y > 0, or k_z = k_y = 0 and k_x > 0.
bool in_half_space(const Vec3& k);
bool in_half_space(const IntVec3& k);

enum class NormalizationMode { approx, exact };

// n_{alpha,k} = sqrt(4 pi N^(2/3) |k . omega_alpha| / M). Tangential modes give 0.
double normalization_approx(const PatchSet& patches, int alpha, const Vec3& k, double n_ref);

// Lattice predicate for the patch alpha extended radially to the shell
// k_F - extension <= |q| <= k_F + extension.
LatticePredicate patch_predicate(const PatchSet& patches, int alpha, const FermiBall& ball, double radial_extension);

// sqrt of the exact pair count inside the radially extended patch. The
// extension defaults to max(|k|, 1), wide enough to keep every pair.
double normalization_exact(const PatchSet& patches, int alpha, const IntVec3& k, const FermiBall& ball,
                           std::optional<double> radial_extension = std::nullopt);

double normalization(const PatchSet& patches, int alpha, const IntVec3& k, const FermiBall& ball,
                     NormalizationMode mode);

}  // namespace bosonize
