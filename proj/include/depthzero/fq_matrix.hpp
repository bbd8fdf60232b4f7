#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "depthzero/exact.hpp"
#include "depthzero/finite_field.hpp"
#include "depthzero/root_datum.hpp"

namespace depthzero {

/// Dense matrix over a finite field.
class FqMatrix {
 public:
  FqMatrix() = default;
  FqMatrix(FieldPtr field, std::size_t rows, std::size_t cols);
  static FqMatrix identity(FieldPtr field, std::size_t n);
  /// Image of an integer matrix (entries reduced mod p).
  static FqMatrix from_int(FieldPtr field, const IntMatrix& m);
  static FqMatrix from_rows(FieldPtr field, const std::vector<std::vector<Fq>>& rows);

  const FieldPtr& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Fq& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Fq operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<Fq>& data() const { return data_; }
  std::vector<Fq> row(std::size_t i) const;

  bool is_identity() const;
  bool is_zero() const;
  FqMatrix transpose() const;
  /// Entrywise q-power map, iterated k times.
  FqMatrix frobenius(unsigned k = 1) const;
  FqMatrix prime_frobenius(unsigned k = 1) const;

  friend bool operator==(const FqMatrix& a, const FqMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator<(const FqMatrix& a, const FqMatrix& b) { return a.data_ < b.data_; }

  /// One line of space-separated tower coordinates, row-major.
  std::string to_line() const;

 private:
  FieldPtr field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Fq> data_;
};

FqMatrix operator*(const FqMatrix& a, const FqMatrix& b);
FqMatrix operator+(const FqMatrix& a, const FqMatrix& b);
FqMatrix operator-(const FqMatrix& a, const FqMatrix& b);
FqMatrix scale(const FqMatrix& a, Fq c);

struct FqEchelon {
  FqMatrix reduced;
  std::vector<std::size_t> pivots;
};

FqEchelon rref(FqMatrix m);
std::size_t rank(const FqMatrix& m);
Fq det(const FqMatrix& m);
/// DomainError when singular.
FqMatrix inverse(const FqMatrix& m);
/// Basis of {x : m x = 0} as column vectors.
std::vector<std::vector<Fq>> nullspace(const FqMatrix& m);
std::optional<std::vector<Fq>> solve(const FqMatrix& m, const std::vector<Fq>& b);

struct FqMatrixHash {
  std::size_t operator()(const FqMatrix& m) const noexcept;
};

/// Determinant of the Moore matrix (phi^{i-1}(a_j)) where phi is the p-power
/// map (`prime_power` true) or the q-power map. Nonzero exactly when the a_j
/// are independent over the fixed field of phi.
Fq moore_det(const FieldPtr& field, const std::vector<Fq>& a, bool prime_power = true);
FqMatrix moore_matrix(const FieldPtr& field, const std::vector<Fq>& a, bool prime_power = true);

/// I + c E_{ij} for the GL_n root alpha = e_i - e_j.
FqMatrix root_group_element(const BasedRootDatum& datum, const IntVector& alpha, Fq c, const FieldPtr& field);
FqMatrix root_group_element(std::size_t n, std::size_t i, std::size_t j, Fq c, const FieldPtr& field);

/// |GL_n(F_Q)|.
Integer gl_group_order(std::size_t n, std::uint64_t Q);

/// Visit every element of GL_n(field) exactly once. SizeError when the
/// group order exceeds `budget`.
void enumerate_group(const FieldPtr& field, std::size_t n, const std::function<void(const FqMatrix&)>& visit,
                     std::uint64_t budget = 10000000);

/// Visit every element of GL_n(F_q) inside GL_n(field) (entries fixed by
/// the q-power map).
void enumerate_rational_group(const FieldPtr& field, std::size_t n,
                              const std::function<void(const FqMatrix&)>& visit, std::uint64_t budget = 10000000);

}  // namespace depthzero
