#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "depthzero/exact.hpp"

namespace depthzero {

/// A rational polyhedral cone given both by generators and by covectors whose
/// nonnegative-pairing locus it is.
struct ConeRecord {
  std::vector<IntVector> generators;
  std::vector<IntVector> inequalities;
  /// Orbit label of the cone after sorting into the dominant region, e.g.
  /// "sigma_1" for a maximal cone or "{n1,p3}" for the face spanned by
  /// -e_1 and e_3 + ... + e_n.
  std::string label;
  /// Coordinate permutation carrying the dominant cone onto this one:
  /// coordinate i of the dominant cone becomes coordinate perm[i].
  std::vector<std::size_t> perm;
};

struct FanData {
  std::size_t n = 0;
  std::vector<ConeRecord> cones;  // maximal cones
  bool weyl_closure = false;
};

/// The cone sigma_ell = {a_1 <= ... <= a_ell <= 0 <= a_{ell+1} <= ... <= a_n}.
ConeRecord sigma_cone(std::size_t n, std::size_t ell);

/// sigma_0..sigma_n, plus all coordinate-permutation translates when
/// `weyl_closure` is set.
FanData kgl_fan(std::size_t n, bool weyl_closure = true);

bool cone_contains(const ConeRecord& cone, const RatVector& v);

/// The minimal cone of the fan containing v. Throws DomainError when no
/// maximal cone contains v.
ConeRecord locate(const FanData& fan, const RatVector& v);

/// Orbit label of the minimal KGL_n cone through v, read off from v directly.
std::string kgl_orbit_label(const RatVector& v);

/// Each generator set spans the cone cut out by the inequalities and vice
/// versa, every generator and every facet normal primitive.
bool double_description_consistent(const ConeRecord& cone);
/// Every coordinate permutation of every cone is again a cone of the fan.
bool weyl_stable(const FanData& fan);
/// For every face of every maximal cone, each maximal cone through a relative
/// interior point of that face meets it exactly in that face.
bool faces_consistent(const FanData& fan);

/// One cone per block: label, permutation, generators, inequalities.
std::string fan_to_text(const FanData& fan);

}  // namespace depthzero
