#include "depthzero/fq_matrix.hpp"

#include <sstream>
#include <utility>

#include "depthzero/errors.hpp"
#include "depthzero/lambda_engine.hpp"

namespace depthzero {

FqMatrix::FqMatrix(FieldPtr field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, Fq{0}) {}

FqMatrix FqMatrix::identity(FieldPtr field, std::size_t n) {
  FqMatrix m(std::move(field), n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Fq{1};
  return m;
}

FqMatrix FqMatrix::from_int(FieldPtr field, const IntMatrix& src) {
  FqMatrix m(field, src.rows(), src.cols());
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j) m(i, j) = field->from_int(src(i, j));
  return m;
}

FqMatrix FqMatrix::from_rows(FieldPtr field, const std::vector<std::vector<Fq>>& rows) {
  const std::size_t c = rows.empty() ? 0 : rows.front().size();
  FqMatrix m(std::move(field), rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw DimensionError("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<Fq> FqMatrix::row(std::size_t i) const {
  return std::vector<Fq>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

bool FqMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j).v != (i == j ? 1u : 0u)) return false;
  return true;
}

bool FqMatrix::is_zero() const {
  for (auto x : data_)
    if (x.v) return false;
  return true;
}

FqMatrix FqMatrix::transpose() const {
  FqMatrix t(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

FqMatrix FqMatrix::frobenius(unsigned k) const {
  FqMatrix r(*this);
  for (auto& x : r.data_) x = field_->frobenius(x, k);
  return r;
}

FqMatrix FqMatrix::prime_frobenius(unsigned k) const {
  FqMatrix r(*this);
  for (auto& x : r.data_) x = field_->prime_frobenius(x, k);
  return r;
}

std::string FqMatrix::to_line() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < data_.size(); ++k) os << (k ? " " : "") << field_->to_string(data_[k]);
  return os.str();
}

FqMatrix operator*(const FqMatrix& a, const FqMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product shape mismatch");
  const auto& F = *a.field();
  FqMatrix c(a.field(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Fq aik = a(i, k);
      if (!aik.v) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (b(k, j).v) c(i, j) = F.add(c(i, j), F.mul(aik, b(k, j)));
    }
  return c;
}

FqMatrix operator+(const FqMatrix& a, const FqMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix sum shape mismatch");
  FqMatrix c(a);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a.field()->add(a(i, j), b(i, j));
  return c;
}

FqMatrix operator-(const FqMatrix& a, const FqMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix difference shape mismatch");
  FqMatrix c(a);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a.field()->sub(a(i, j), b(i, j));
  return c;
}

FqMatrix scale(const FqMatrix& a, Fq c) {
  FqMatrix r(a);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a.field()->mul(a(i, j), c);
  return r;
}

FqEchelon rref(FqMatrix m) {
  const auto& F = *m.field();
  FqEchelon out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && !m(piv, c).v) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    const Fq inv = F.inv(m(r, c));
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = F.mul(m(r, j), inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || !m(i, c).v) continue;
      const Fq f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = F.sub(m(i, j), F.mul(f, m(r, j)));
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const FqMatrix& m) { return rref(m).pivots.size(); }

Fq det(const FqMatrix& src) {
  if (src.rows() != src.cols()) throw DimensionError("determinant of a non-square matrix");
  const auto& F = *src.field();
  FqMatrix m(src);
  const std::size_t n = m.rows();
  Fq d = F.one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && !m(piv, c).v) ++piv;
    if (piv == n) return F.zero();
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      d = F.neg(d);
    }
    d = F.mul(d, m(c, c));
    const Fq inv = F.inv(m(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (!m(i, c).v) continue;
      const Fq f = F.mul(m(i, c), inv);
      for (std::size_t j = c; j < n; ++j) m(i, j) = F.sub(m(i, j), F.mul(f, m(c, j)));
    }
  }
  return d;
}

FqMatrix inverse(const FqMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  FqMatrix aug(m.field(), n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = Fq{1};
  }
  const auto ech = rref(aug);
  if (ech.pivots.size() < n || ech.pivots[n - 1] != n - 1) throw DomainError("matrix is singular");
  FqMatrix inv(m.field(), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = ech.reduced(i, n + j);
  return inv;
}

std::vector<std::vector<Fq>> nullspace(const FqMatrix& m) {
  const auto& F = *m.field();
  const auto ech = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : ech.pivots) is_pivot[p] = true;
  std::vector<std::vector<Fq>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Fq> v(m.cols(), F.zero());
    v[free] = F.one();
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) v[ech.pivots[r]] = F.neg(ech.reduced(r, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<Fq>> solve(const FqMatrix& m, const std::vector<Fq>& b) {
  if (b.size() != m.rows()) throw DimensionError("right-hand side length mismatch");
  FqMatrix aug(m.field(), m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  const auto ech = rref(aug);
  std::vector<Fq> x(m.cols(), Fq{0});
  for (std::size_t r = 0; r < ech.pivots.size(); ++r) {
    if (ech.pivots[r] == m.cols()) return std::nullopt;
    x[ech.pivots[r]] = ech.reduced(r, m.cols());
  }
  return x;
}

std::size_t FqMatrixHash::operator()(const FqMatrix& m) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto x : m.data()) h = (h ^ x.v) * 1099511628211ull;
  return h;
}

FqMatrix moore_matrix(const FieldPtr& field, const std::vector<Fq>& a, bool prime_power) {
  const std::size_t n = a.size();
  const unsigned bound = prime_power ? field->degree() : field->m();
  if (n > bound)
    throw DomainError("Moore matrix of " + std::to_string(n) + " elements exceeds the Frobenius degree " +
                      std::to_string(bound));
  FqMatrix m(field, n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Fq x = a[j];
    for (std::size_t i = 0; i < n; ++i) {
      m(i, j) = x;
      x = prime_power ? field->prime_frobenius(x) : field->frobenius(x);
    }
  }
  return m;
}

Fq moore_det(const FieldPtr& field, const std::vector<Fq>& a, bool prime_power) {
  return det(moore_matrix(field, a, prime_power));
}

FqMatrix root_group_element(std::size_t n, std::size_t i, std::size_t j, Fq c, const FieldPtr& field) {
  if (i >= n || j >= n || i == j) throw DomainError("not a root of GL_n");
  FqMatrix m = FqMatrix::identity(field, n);
  m(i, j) = c;
  return m;
}

FqMatrix root_group_element(const BasedRootDatum& datum, const IntVector& alpha, Fq c, const FieldPtr& field) {
  if (!datum.gl_size()) throw UnsupportedCase("root group elements are only realized for GL_n");
  if (!datum.root_index(alpha)) throw DomainError(to_string(alpha) + " is not a root");
  const std::size_t n = *datum.gl_size();
  std::size_t i = n, j = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (alpha[k] == 1) i = k;
    if (alpha[k] == -1) j = k;
  }
  return root_group_element(n, i, j, c, field);
}

Integer gl_group_order(std::size_t n, std::uint64_t Q) { return gl_order(n, Integer(static_cast<unsigned long>(Q))); }

namespace {

void enumerate_over(const FieldPtr& field, std::size_t n, const std::vector<Fq>& alphabet,
                    const std::function<void(const FqMatrix&)>& visit) {
  const auto& F = *field;
  FqMatrix g(field, n, n);
  // echelon[k]: reduced copies of rows 0..k-1 with their pivots
  std::vector<std::vector<std::vector<Fq>>> basis(n + 1);
  std::vector<std::vector<std::size_t>> pivots(n + 1);

  auto reduce = [&](std::vector<Fq> v, std::size_t level, std::size_t& pivot) {
    for (std::size_t b = 0; b < basis[level].size(); ++b) {
      const std::size_t pc = pivots[level][b];
      if (!v[pc].v) continue;
      const Fq f = v[pc];
      for (std::size_t j = 0; j < n; ++j) v[j] = F.sub(v[j], F.mul(f, basis[level][b][j]));
    }
    pivot = n;
    for (std::size_t j = 0; j < n; ++j)
      if (v[j].v) {
        pivot = j;
        break;
      }
    if (pivot < n) {
      const Fq inv = F.inv(v[pivot]);
      for (auto& x : v) x = F.mul(x, inv);
    }
    return v;
  };

  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == n) {
      visit(g);
      return;
    }
    std::vector<std::size_t> digit(n, 0);
    while (true) {
      std::vector<Fq> v(n);
      for (std::size_t j = 0; j < n; ++j) v[j] = alphabet[digit[j]];
      std::size_t pivot;
      auto red = reduce(v, k, pivot);
      if (pivot < n) {
        for (std::size_t j = 0; j < n; ++j) g(k, j) = v[j];
        // eliminate the new pivot from the older rows to keep them reduced
        basis[k + 1].clear();
        pivots[k + 1] = pivots[k];
        for (const auto& b : basis[k]) {
          std::vector<Fq> nb = b;
          const Fq f = nb[pivot];
          if (f.v)
            for (std::size_t j = 0; j < n; ++j) nb[j] = F.sub(nb[j], F.mul(f, red[j]));
          basis[k + 1].push_back(std::move(nb));
        }
        basis[k + 1].push_back(red);
        pivots[k + 1].push_back(pivot);
        rec(k + 1);
      }
      std::size_t pos = 0;
      while (pos < n && ++digit[pos] == alphabet.size()) digit[pos++] = 0;
      if (pos == n) break;
    }
  };
  rec(0);
}

}  // namespace

void enumerate_group(const FieldPtr& field, std::size_t n, const std::function<void(const FqMatrix&)>& visit,
                     std::uint64_t budget) {
  if (gl_group_order(n, field->size()) > Integer(static_cast<unsigned long>(budget)))
    throw SizeError("|GL_" + std::to_string(n) + "(F_" + std::to_string(field->size()) + ")| exceeds the budget");
  std::vector<Fq> alphabet;
  for (std::uint64_t k = 0; k < field->size(); ++k) alphabet.push_back(field->element(k));
  enumerate_over(field, n, alphabet, visit);
}

void enumerate_rational_group(const FieldPtr& field, std::size_t n,
                              const std::function<void(const FqMatrix&)>& visit, std::uint64_t budget) {
  if (gl_group_order(n, field->q()) > Integer(static_cast<unsigned long>(budget)))
    throw SizeError("|GL_" + std::to_string(n) + "(F_" + std::to_string(field->q()) + ")| exceeds the budget");
  std::vector<Fq> alphabet;
  for (std::uint64_t k = 0; k < field->size(); ++k)
    if (field->in_base_field(field->element(k))) alphabet.push_back(field->element(k));
  enumerate_over(field, n, alphabet, visit);
}

}  // namespace depthzero
