#pragma once

// Exact integer and rational linear algebra shared by the lattice modules.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace depthzero {

using Integer = mpz_class;
using Rational = mpq_class;

/// Lattice vectors (cocharacters, root covectors). Arithmetic on them is
/// overflow-checked; an overflow raises DomainError instead of wrapping.
using IntVector = std::vector<std::int64_t>;
using RatVector = std::vector<Rational>;

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

std::string to_string(const Rational& r);
std::string to_string(const Integer& z);
std::string to_string(const IntVector& v);
std::string to_string(const RatVector& v);

RatVector to_rational(const IntVector& v);
/// Least common multiple of the coordinate denominators.
Integer common_denominator(const RatVector& v);
Integer lcm(const Integer& a, const Integer& b);

/// Dense integer matrix acting on column vectors.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  static IntMatrix identity(std::size_t n);
  /// Build from row-major nested rows; all rows must share a length.
  static IntMatrix from_rows(const std::vector<IntVector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<std::int64_t>& data() const { return data_; }

  IntMatrix transpose() const;
  bool is_identity() const;
  std::vector<IntVector> to_rows() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
  friend auto operator<=>(const IntMatrix& a, const IntMatrix& b) {
    return a.data_ <=> b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, const IntVector& v);
RatVector operator*(const IntMatrix& a, const RatVector& v);
/// Row vector times matrix.
IntVector row_times(const IntVector& row, const IntMatrix& m);
IntMatrix power(const IntMatrix& m, std::uint64_t k);
/// Inverse of a unimodular matrix; DomainError if not invertible over Z.
IntMatrix unimodular_inverse(const IntMatrix& m);
/// Multiplicative order, or nullopt when it exceeds `bound`.
std::optional<std::uint64_t> matrix_order(const IntMatrix& m, std::uint64_t bound);

struct IntMatrixHash {
  std::size_t operator()(const IntMatrix& m) const noexcept;
};

/// Dense rational matrix.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  static RatMatrix from_int(const IntMatrix& m);
  static RatMatrix from_rows(const std::vector<RatVector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  RatVector row(std::size_t i) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
RatVector operator*(const RatMatrix& a, const RatVector& v);

struct EchelonForm {
  RatMatrix reduced;                 // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

EchelonForm rref(RatMatrix m);
std::size_t rank(const RatMatrix& m);
/// Basis of {x : m x = 0}.
std::vector<RatVector> nullspace(const RatMatrix& m);
/// Some x with m x = b, or nullopt when inconsistent.
std::optional<RatVector> solve(const RatMatrix& m, const RatVector& b);
std::optional<RatMatrix> inverse(const RatMatrix& m);
/// Scale a rational vector to a primitive integer vector with the same ray.
IntVector primitive_integer_vector(const RatVector& v);

/// Invariant factors d_1 | d_2 | ... of an integer matrix (Smith normal
/// form), nonnegative, with zeros for the free part listed last. The list has
/// min(rows, cols) entries.
std::vector<Integer> smith_invariant_factors(const IntMatrix& m);

}  // namespace depthzero
