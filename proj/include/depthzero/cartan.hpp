#pragma once

#include <string>

#include "depthzero/puiseux.hpp"
#include "depthzero/toroidal_fan.hpp"

namespace depthzero {

struct CartanDecomposition {
  PMatrix g1;
  RatVector exponents;  // non-decreasing
  PMatrix g2;
  /// diag(u^{a_1}, ..., u^{a_n}).
  PMatrix t() const;
};

/// g = g1 t g2 with g1, g2 invertible over the valuation ring, by pivoting on
/// a least-valuation entry. PrecisionError if a pivot cannot be certified.
CartanDecomposition cartan_decompose(const PMatrix& g);

struct Specialization {
  std::string orbit_label;
  ConeRecord cone;
  FqMatrix g1_residue;
  RatVector exponents;
  FqMatrix g2_residue;
};

/// Residues of the Cartan factors and the fan cone of the exponent vector.
Specialization specialize_point(const PMatrix& g, const FanData& fan);

}  // namespace depthzero
