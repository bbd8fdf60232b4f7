#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace depthzero {

/// Element of a finite field: the base-p digit string of its coordinates in
/// the polynomial basis 1, x, x^2, ... read as an integer. 0 and 1 are the
/// field's zero and one.
struct Fq {
  std::uint32_t v = 0;
  friend bool operator==(Fq a, Fq b) { return a.v == b.v; }
  friend auto operator<=>(Fq a, Fq b) { return a.v <=> b.v; }
};

/// F_Q with Q = q^m and q = p^f, presented as F_p[x]/(P) for the least
/// primitive polynomial P of degree f*m (least in the digit order above).
/// The Frobenius is the q-power map.
class FiniteField {
 public:
  static std::shared_ptr<const FiniteField> make(std::uint64_t p, unsigned f, unsigned m);

  std::uint64_t p() const { return p_; }
  unsigned f() const { return f_; }
  unsigned m() const { return m_; }
  std::uint64_t q() const { return q_; }
  /// Number of elements.
  std::uint64_t size() const { return size_; }
  /// Degree over the prime field.
  unsigned degree() const { return degree_; }
  /// Coefficients c_0..c_{d-1} of the monic defining polynomial (c_d = 1).
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  Fq zero() const { return {0}; }
  Fq one() const { return {1}; }
  /// Image of an integer in the prime field.
  Fq from_int(std::int64_t k) const;
  /// Generator of the multiplicative group (the class of x).
  Fq generator() const;
  Fq element(std::uint64_t index) const;

  Fq add(Fq a, Fq b) const;
  Fq sub(Fq a, Fq b) const;
  Fq neg(Fq a) const;
  Fq mul(Fq a, Fq b) const;
  /// DomainError on zero.
  Fq inv(Fq a) const;
  Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }
  Fq pow(Fq a, std::uint64_t k) const;

  /// x -> x^q, iterated k times.
  Fq frobenius(Fq a, unsigned k = 1) const;
  /// x -> x^p, iterated k times.
  Fq prime_frobenius(Fq a, unsigned k = 1) const;

  /// Discrete logarithm base generator(); DomainError on zero.
  std::uint64_t log(Fq a) const;
  /// generator()^((Q-1)/e); DomainError unless e | Q - 1.
  Fq root_of_unity(std::uint64_t e) const;

  bool in_prime_field(Fq a) const { return a.v < p_; }
  /// Fixed by the q-power map.
  bool in_base_field(Fq a) const { return frobenius(a) == a; }

  std::vector<std::uint32_t> coords(Fq a) const;
  Fq from_coords(const std::vector<std::uint32_t>& c) const;

  /// Integer for prime-field elements, otherwise [c0,c1,...].
  std::string to_string(Fq a) const;

 private:
  FiniteField(std::uint64_t p, unsigned f, unsigned m);
  std::vector<std::uint32_t> poly_mul(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) const;
  Fq slow_mul(Fq a, Fq b) const;
  Fq slow_add(Fq a, Fq b, bool subtract) const;

  std::uint64_t p_, q_, size_;
  unsigned f_, m_, degree_;
  std::vector<std::uint32_t> modulus_;
  bool tables_ = false;
  std::vector<std::uint32_t> exp_;  // exp_[k] = g^k, length Q - 1
  std::vector<std::uint32_t> log_;  // log_[v] for v != 0
  std::vector<std::int64_t> zech_;  // log(1 + g^k), -1 when 1 + g^k = 0
};

using FieldPtr = std::shared_ptr<const FiniteField>;

}  // namespace depthzero
