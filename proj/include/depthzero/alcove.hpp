#pragma once

#include <cstddef>
#include <vector>

#include "depthzero/exact.hpp"
#include "depthzero/root_datum.hpp"

namespace depthzero {

/// Open base alcove: -1 < <alpha, x> < 0 for every positive root. With
/// `closed`, the inequalities become non-strict.
bool base_alcove_contains(const BasedRootDatum& datum, const RatVector& x, bool closed = false);

/// Points of the apartment are taken modulo the central subspace.
bool equal_mod_center(const BasedRootDatum& datum, const RatVector& x, const RatVector& y);

/// A deterministic point of the open base alcove.
RatVector alcove_interior_point(const BasedRootDatum& datum);

/// The unique Weyl element w with x -> w(x) - mu stabilizing the base alcove.
/// Throws InvariantViolation when there is none (mu not dominant minuscule).
WeylElement length_zero_w(const BasedRootDatum& datum, const IntVector& mu);

/// x_k = -sum_{j<k} (w sigma)^j mu for k = 0..k_max.
std::vector<RatVector> b_sigma_orbit(const BasedRootDatum& datum, const IntVector& mu, const IntMatrix& w,
                                     std::size_t k_max);

struct FacetRecord {
  std::vector<std::size_t> zero_roots;  // indices of roots vanishing on lambda
  RatVector sample_interior_point;
  bool orbit_in_facet_span = false;     // every orbit point lies in the facet's span
  bool orbit_spans_facet = false;       // the orbit and the center span it
};

FacetRecord facet_of_lambda(const BasedRootDatum& datum, const RatVector& lambda, const IntVector& mu,
                            const IntMatrix& w);

struct MinimalityReport {
  bool minimal;
  std::size_t fixed_quotient_dim;  // dimension of the w sigma-fixed part of X_*(Z_M)/X_*(Z_G)
  /// When not minimal: a fixed vector (mod center) that is not central.
  RatVector witness;
};

MinimalityReport facet_minimality(const BasedRootDatum& datum, const IntMatrix& w, const RatVector& lambda);
bool facet_is_minimal(const BasedRootDatum& datum, const IntMatrix& w, const RatVector& lambda);

}  // namespace depthzero
