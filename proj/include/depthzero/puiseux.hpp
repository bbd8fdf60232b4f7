#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "depthzero/exact.hpp"
#include "depthzero/finite_field.hpp"
#include "depthzero/fq_matrix.hpp"

namespace depthzero {

/// Truncated Puiseux series sum c_k u^{k/ram} over a finite field. Terms at
/// exponents >= trunc are unknown and never stored.
class Puiseux {
 public:
  Puiseux() = default;
  static Puiseux zero(FieldPtr field, Rational trunc, std::int64_t ram = 1);
  static Puiseux constant(FieldPtr field, Fq c, Rational trunc);
  /// c u^exponent.
  static Puiseux monomial(FieldPtr field, Fq c, const Rational& exponent, Rational trunc);

  const FieldPtr& field() const { return field_; }
  std::int64_t ram() const { return ram_; }
  const Rational& trunc() const { return trunc_; }
  /// nullopt for an element with no known nonzero term.
  std::optional<Rational> val() const;
  bool is_zero() const { return terms_.empty(); }
  Fq leading_coefficient() const;
  Fq coefficient(const Rational& exponent) const;
  std::vector<std::pair<Rational, Fq>> terms() const;
  /// Constant term; DomainError when a negative exponent is present.
  Fq residue() const;

  /// Same element known only below min(trunc(), t).
  Puiseux truncated(const Rational& t) const;
  Puiseux with_ram(std::int64_t ram) const;

  friend Puiseux operator+(const Puiseux& a, const Puiseux& b);
  friend Puiseux operator-(const Puiseux& a, const Puiseux& b);
  friend Puiseux operator*(const Puiseux& a, const Puiseux& b);
  Puiseux operator-() const;
  Puiseux scaled(Fq c) const;
  /// Multiply by u^exponent.
  Puiseux shifted(const Rational& exponent) const;

  /// Same terms and same truncation.
  friend bool operator==(const Puiseux& a, const Puiseux& b);
  /// a - b has no term below `prec`; PrecisionError if prec exceeds what is known.
  friend bool agree_to(const Puiseux& a, const Puiseux& b, const Rational& prec);

  std::string to_string() const;

 private:
  Puiseux(FieldPtr field, std::int64_t ram, Rational trunc) : field_(std::move(field)), ram_(ram), trunc_(std::move(trunc)) {}
  void insert(std::int64_t key, Fq c);
  void drop_unknown();

  FieldPtr field_;
  std::int64_t ram_ = 1;
  Rational trunc_;
  std::map<std::int64_t, Fq> terms_;  // key k stands for u^{k/ram}

  friend Puiseux inv(const Puiseux& x);
  friend Puiseux qpower(const Puiseux& x, unsigned k);
};

/// Multiplicative inverse; PrecisionError if x has no known nonzero term.
Puiseux inv(const Puiseux& x);
/// x^{q^k} for the coefficient field's q.
Puiseux qpower(const Puiseux& x, unsigned k = 1);

/// Parse `c*u^(a/b) + c*u^a + c*u + c + O(u^(t))`. A coefficient is an
/// integer or tower coordinates `[c0,c1,...]`; a leading `-` negates a term.
/// The O-term sets the truncation; without it `trunc` must be supplied.
Puiseux parse_series(const FieldPtr& field, const std::string& text, std::optional<Rational> trunc = std::nullopt);

/// Dense matrix of Puiseux series.
class PMatrix {
 public:
  PMatrix() = default;
  PMatrix(std::size_t rows, std::size_t cols, const Puiseux& fill);
  static PMatrix identity(const FieldPtr& field, std::size_t n, const Rational& trunc);
  static PMatrix from_fq(const FqMatrix& m, const Rational& trunc);
  static PMatrix diagonal(const std::vector<Puiseux>& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Puiseux& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Puiseux& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const FieldPtr& field() const { return data_.front().field(); }

  PMatrix qpower(unsigned k = 1) const;
  PMatrix truncated(const Rational& t) const;
  Rational min_trunc() const;
  /// Least valuation over all entries; nullopt if every entry vanishes.
  std::optional<Rational> val() const;
  /// Entrywise constant terms; DomainError if an entry has negative valuation.
  FqMatrix residue() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Puiseux> data_;
};

PMatrix operator*(const PMatrix& a, const PMatrix& b);
PMatrix operator+(const PMatrix& a, const PMatrix& b);
PMatrix operator-(const PMatrix& a, const PMatrix& b);
/// Gauss-Jordan with least-valuation pivots; PrecisionError when a pivot
/// cannot be certified nonzero.
PMatrix inverse(const PMatrix& m);
/// Entrywise agreement below `prec`.
bool agree_to(const PMatrix& a, const PMatrix& b, const Rational& prec);

struct SigmaLift {
  PMatrix h;
  /// Valuation of the defect h sigma(h)^{-1} G^{-1} - 1 before each correction.
  std::vector<Rational> defect_valuations;
};

/// The unique h extending h0 with h sigma(h)^{-1} = G, by the correction
/// h <- d^{-1} h with d = h sigma(h)^{-1} G^{-1}. Stops once the defect
/// vanishes below the working precision. InvariantViolation if the defect
/// valuation fails to increase strictly.
SigmaLift solve_sigma_lift(const PMatrix& G, const PMatrix& h0, std::size_t max_steps = 64);

}  // namespace depthzero
