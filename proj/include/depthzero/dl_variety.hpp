#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "depthzero/fq_matrix.hpp"
#include "depthzero/lambda_engine.hpp"

namespace depthzero {

/// A point of the parabolic Deligne-Lusztig variety, stored by its unique
/// representative g with g^{-1} sigma(g) w^{-1} in U_{mu<0}.
struct YwPoint {
  FqMatrix rep;
  unsigned field_level;
};

/// Matrix-level data for a GL_n Shimura datum over F_{q^m}: the permutation
/// matrix of w, the root patterns of the unipotent groups involved, and the
/// maps pi_w, phi_w built from them. sigma is the entrywise q-power map.
class DLContext {
 public:
  DLContext(const ShimuraDatum& sd, const LambdaData& ld, unsigned m);

  const FieldPtr& field() const { return field_; }
  std::size_t n() const { return n_; }
  unsigned level() const { return m_; }
  const FqMatrix& w() const { return w_; }
  const FqMatrix& w_inv() const { return w_inv_; }
  const ShimuraDatum& datum() const { return *sd_; }
  const LambdaData& lambda() const { return *ld_; }

  /// Root e_i - e_j as the matrix slot (i, j).
  using Slot = std::pair<std::size_t, std::size_t>;
  const std::vector<Slot>& u_mu_neg_slots() const { return u_mu_neg_; }
  /// Phi(N) cap w sigma Phi(N).
  const std::vector<Slot>& phi0_slots() const { return phi0_; }
  /// Phi(Nbar) cap w sigma Phi(N).
  const std::vector<Slot>& kernel_slots() const { return kernel_; }
  const std::vector<Slot>& n_slots() const { return n_slots_; }
  const std::vector<Slot>& wn_slots() const { return wn_; }

  /// I + (entries on `slots` only).
  bool in_pattern(const FqMatrix& x, const std::vector<Slot>& slots) const;
  bool in_u_mu_neg(const FqMatrix& x) const { return in_pattern(x, u_mu_neg_); }
  /// Block-diagonal for the Levi M.
  bool in_levi(const FqMatrix& x) const;
  /// Ad(w sigma)(x) = w sigma(x) w^{-1}.
  FqMatrix ad_wsigma(const FqMatrix& x) const;

  /// g^{-1} sigma(g) w^{-1}; DomainError for singular g.
  FqMatrix lang_value(const FqMatrix& g) const;
  bool is_point(const FqMatrix& g) const { return in_u_mu_neg(lang_value(g)); }

  /// Quotient of Ad(w sigma)(N) by Nbar cap Ad(w sigma)(N), realized as the
  /// unique factor a in N cap Ad(w sigma)(N) with y = a b. DomainError if y is
  /// outside Ad(w sigma)(N).
  FqMatrix pi_w(const FqMatrix& y) const;
  FqMatrix phi_w(const FqMatrix& h) const;

  struct ArtinSchreier {
    FqMatrix h;
    std::size_t steps;
  };
  /// The unique h in N cap Ad(w sigma)(N) with h phi_w(h)^{-1} = x, by the
  /// iteration h <- x phi_w(h) from h = x.
  ArtinSchreier solve_artin_schreier(const FqMatrix& x) const;

  /// Representative of the class of g in G/N, for g^{-1} sigma(g) in
  /// N w sigma(N); DomainError when g is outside that locus.
  YwPoint canonicalize(const FqMatrix& g) const;

  /// (ζ_e^tau)^{e lambda} as a diagonal matrix; needs e | q^m - 1.
  FqMatrix inertia_matrix(std::int64_t tau) const;

  /// canonicalize(g0 rep mm^{-1} (ζ_e^tau)^{e lambda}).
  YwPoint act(const YwPoint& pt, const FqMatrix& g0, const FqMatrix& mm, std::int64_t tau) const;

 private:
  const ShimuraDatum* sd_;
  const LambdaData* ld_;
  std::size_t n_;
  unsigned m_;
  FieldPtr field_;
  FqMatrix w_, w_inv_;
  std::vector<Slot> u_mu_neg_, phi0_, kernel_, n_slots_, wn_, n_not_wn_;
  std::vector<std::size_t> block_;  // Levi block of each index
};

struct YwEnumeration {
  std::vector<YwPoint> points;
  /// Lang value in U_{mu<0} -> number of points over it.
  std::map<FqMatrix, std::uint64_t> fibers;
};

/// Every g in GL_n(F_{q^m}) with g^{-1} sigma(g) w^{-1} in U_{mu<0}.
YwEnumeration enumerate_Yw(const DLContext& ctx, std::uint64_t budget = 10000000);

/// Solutions g in GL_n(F_{q^m}) of g^{-1} sigma(g) = x, found by F_p-linear
/// algebra; empty when x has no rational solution at this level.
std::optional<FqMatrix> lang_preimage(const FieldPtr& field, const FqMatrix& x);

struct MwsigmaPoints {
  std::uint64_t order;
  std::vector<FqMatrix> elements;
  FieldPtr field;
};

/// All x in M(F_{q^level}) with w sigma(x) w^{-1} = x; level 0 means N.
MwsigmaPoints m_wsigma_points(const ShimuraDatum& sd, const LambdaData& ld, unsigned level = 0,
                              std::uint64_t budget = 10000000);

/// (ζ_e^{-tau (e lambda)_1}, ..., ζ_e^{-tau (e lambda)_n}) in `field`.
std::vector<Fq> inertia_torus_element(const FieldPtr& field, const LambdaData& ld, std::int64_t tau);

/// One matrix per line, entries as tower coordinates.
std::string export_points(const std::vector<YwPoint>& points);

}  // namespace depthzero
