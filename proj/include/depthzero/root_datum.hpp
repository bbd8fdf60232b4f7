#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "depthzero/exact.hpp"

namespace depthzero {

/// Based root datum of a split reductive group with a pinned automorphism.
/// Roots are covectors on the cocharacter lattice, coroots are vectors, and
/// the pairing is the coordinate dot product. The Weyl group and sigma act on
/// cocharacters by matrix multiplication and on roots by alpha -> alpha M^{-1}.
class BasedRootDatum {
 public:
  /// Validates every structural invariant; throws DimensionError or
  /// InvariantViolation when the data do not form a based root datum.
  BasedRootDatum(std::size_t rank, std::vector<IntVector> roots, std::vector<IntVector> coroots,
                 std::vector<std::size_t> simple_roots, IntMatrix sigma);

  std::size_t rank() const { return rank_; }
  const std::vector<IntVector>& roots() const { return roots_; }
  const std::vector<IntVector>& coroots() const { return coroots_; }
  const std::vector<std::size_t>& simple_roots() const { return simple_; }
  const IntMatrix& sigma() const { return sigma_; }
  std::uint64_t sigma_order() const { return sigma_order_; }
  const std::vector<IntVector>& center_cochars() const { return center_; }

  /// Set by gl_datum; enables the matrix-level modules.
  std::optional<std::size_t> gl_size() const { return gl_n_; }
  void mark_gl(std::size_t n) { gl_n_ = n; }

  std::size_t num_roots() const { return roots_.size(); }
  std::optional<std::size_t> root_index(const IntVector& alpha) const;
  bool is_positive(std::size_t root) const { return positive_[root]; }
  /// Coefficients of a root in the simple-root basis.
  const IntVector& simple_coefficients(std::size_t root) const { return coeffs_[root]; }
  std::int64_t height(std::size_t root) const;

  /// Matrix of the simple reflection x -> x - <alpha, x> alpha^vee.
  IntMatrix reflection(std::size_t root) const;
  /// Image of a root under a lattice automorphism acting on cocharacters.
  IntVector act_on_root(const IntMatrix& m, const IntVector& alpha) const;
  /// Permutation of root indices induced by m, or nullopt if m does not
  /// preserve the root set.
  std::optional<std::vector<std::size_t>> root_permutation(const IntMatrix& m) const;
  bool is_central(const RatVector& nu) const;

 private:
  std::size_t rank_;
  std::vector<IntVector> roots_;
  std::vector<IntVector> coroots_;
  std::vector<std::size_t> simple_;
  IntMatrix sigma_;
  std::uint64_t sigma_order_ = 1;
  std::vector<IntVector> center_;
  std::vector<bool> positive_;
  std::vector<IntVector> coeffs_;
  std::optional<std::size_t> gl_n_;
};

struct WeylElement {
  IntMatrix matrix;
  /// Reduced word in simple-root indices (positions into simple_roots()).
  std::vector<std::size_t> word;
};

struct CocharacterClass {
  bool dominant;
  bool minuscule;
};

Rational pairing(const IntVector& alpha, const RatVector& nu);
std::int64_t pairing(const IntVector& alpha, const IntVector& nu);

CocharacterClass classify_cocharacter(const BasedRootDatum& datum, const IntVector& mu);
bool is_dominant(const BasedRootDatum& datum, const RatVector& nu);

/// All Weyl group elements, identity first, in breadth-first order by length.
std::vector<WeylElement> weyl_group(const BasedRootDatum& datum, std::size_t bound = 1000000);

IntVector two_rho(const BasedRootDatum& datum);

/// GL_n with positive roots e_i - e_j for i > j, so that (-1, 0, ..., 0) is
/// dominant; sigma is the identity.
BasedRootDatum gl_datum(std::size_t n);

/// Rank-r split torus: no roots.
BasedRootDatum torus_datum(std::size_t r);

/// Product of data, with sigma acting factorwise (block diagonal).
BasedRootDatum product_datum(const std::vector<BasedRootDatum>& factors);

/// Restriction of scalars of `base` along a degree-k extension: k copies of
/// the factor with sigma cycling them.
BasedRootDatum cyclic_restriction(const BasedRootDatum& base, std::size_t k);

/// The dominant minuscule cocharacters of GL_n with entries in {-1, 0}:
/// (-1,...,-1, 0,...,0) for every count of -1 entries, 0 through n.
std::vector<IntVector> gl_minuscule_cocharacters(std::size_t n);

}  // namespace depthzero
