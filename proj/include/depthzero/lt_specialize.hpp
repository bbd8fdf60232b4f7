#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "depthzero/dl_variety.hpp"
#include "depthzero/fq_matrix.hpp"
#include "depthzero/puiseux.hpp"

namespace depthzero {

/// Coordinates t_1..t_n of z_1 = e_1 g for a level structure g. Every
/// coordinate has a known nonzero term of positive valuation. Frobenius on
/// coefficients is the p-power map, so the field must have q = p.
struct LevelVector {
  FieldPtr field;
  std::vector<Puiseux> t;
  std::size_t n() const { return t.size(); }
};

/// DomainError unless the invariants above hold; UnsupportedCase if q != p.
void check_level_vector(const LevelVector& z);

/// p z_1 = sigma^n(z_1) + sum_{1<=i<n} u_{i+1} sigma^i(z_1), coordinatewise,
/// to the common precision of both sides. u_flats[i-1] multiplies sigma^i.
/// PrecisionError when the leading term of a side is not covered.
bool verify_level_equation(const LevelVector& z1, const std::vector<Puiseux>& u_flats, const Puiseux& p_flat);

struct NormalizedLevel {
  /// Entries in the prime field; the normalized vector is t * transform.
  FqMatrix transform;
  LevelVector vector;
};

/// Valuations non-decreasing, and leading coefficients of each
/// equal-valuation block independent over F_p.
bool is_normalized(const LevelVector& t);

/// Stable sort by valuation, then clear F_p-dependencies among leading
/// coefficients block by block. A dependency replaces one coordinate by an
/// F_p-combination of strictly larger valuation. PrecisionError if that
/// combination vanishes to the working precision.
NormalizedLevel normalize_breaks(const LevelVector& t);

struct BreakData {
  FieldPtr field;
  std::vector<std::size_t> breaks;   // 0 = i_0 < i_1 < ... < i_k = n
  std::vector<std::size_t> lengths;  // l_j = i_j - i_{j-1}
  /// Reduction of [t_{i_{j-1}+1} : ... : t_{i_j}], scaled to end in 1.
  std::vector<std::vector<Fq>> residues;
};

/// DomainError when t is not normalized.
BreakData breaks(const LevelVector& t);

/// Nested subspaces of the residue n-space; flag[s-1] is the reduced row
/// echelon basis of the s-dimensional term.
struct FlagPoint {
  std::vector<FqMatrix> flag;
  friend bool operator==(const FlagPoint& a, const FlagPoint& b) { return a.flag == b.flag; }
};

/// sigma(Lambda_{s-1}) lies in Lambda_s for every s.
bool sigma_compatible(const FlagPoint& f);

/// Lambda_s spanned by Lambda_{s-1} and sigma^{s-i_{j-1}-1}(p_j) placed in
/// the coordinates of block j. InvariantViolation("moore_nonsingular") if a
/// step fails to raise the rank.
FlagPoint flag_from_breaks(const BreakData& bd);

/// Reduction of (varpi'_i)^{-1} z_1 ^ ... ^ z_i with z_k = sigma^{k-1}(z_1)
/// and varpi'_i = prod_j sigma^{i-j}(t_j), read back as a subspace.
/// Expects a normalized vector.
FlagPoint wedge_oracle(const LevelVector& t);

/// Maximal minors of the rows, column sets in lexicographic order.
std::vector<Fq> plucker(const FqMatrix& rows);
/// The i-dimensional subspace with the given Plucker vector, as a reduced
/// row basis. InvariantViolation if the vector is zero or not decomposable.
FqMatrix subspace_from_plucker(const FieldPtr& field, std::size_t n, std::size_t i, const std::vector<Fq>& coords);

/// Random vector satisfying the normalization conditions: random block
/// lengths (at most the field degree), increasing block valuations, leading
/// coefficients independent per block, sparse higher terms. Truncation is
/// 3 * (largest valuation) + 3 times `precision_scale`.
LevelVector random_normalized_level_vector(const FieldPtr& field, std::size_t n, std::mt19937_64& rng,
                                           unsigned precision_scale = 1);

/// Apply a prime-field matrix: t * a.
LevelVector transform_level_vector(const LevelVector& t, const FqMatrix& a);

/// A level structure built from a point of Y(w) for the GL_n Lubin-Tate
/// datum: the sigma-lift h of the point's inverse through
/// X = (1 + sum_j y_j E_{1,j+1}) w, the level element u^lambda h, and the
/// coefficients of the level equation it satisfies.
struct LevelStructure {
  PMatrix h;
  PMatrix level;  // u^lambda h
  LevelVector z1;  // first row of `level`
  Puiseux p_flat;
  std::vector<Puiseux> u_flats;
};

/// `corrections` (empty, or one per U_{mu<0} slot in order) are added to the
/// residues y_j and must have positive valuation. UnsupportedCase outside
/// the GL_n Lubin-Tate datum.
LevelStructure lift_yw_point(const DLContext& ctx, const YwPoint& pt, const Rational& trunc,
                             const std::vector<Puiseux>& corrections = {});

}  // namespace depthzero
