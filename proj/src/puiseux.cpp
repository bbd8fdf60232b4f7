#include "depthzero/puiseux.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "depthzero/errors.hpp"

namespace depthzero {

namespace {

// Least integer k with k / ram >= t.
std::int64_t key_limit(const Rational& t, std::int64_t ram) {
  Rational scaled = t * Rational(static_cast<long>(ram));
  scaled.canonicalize();
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  if (!c.fits_slong_p()) throw SizeError("series exponent out of range");
  return c.get_si();
}

Rational key_exponent(std::int64_t k, std::int64_t ram) {
  Rational r(static_cast<long>(k), static_cast<unsigned long>(ram));
  r.canonicalize();
  return r;
}

std::int64_t denominator_of(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  if (!c.get_den().fits_slong_p()) throw SizeError("ramification out of range");
  return c.get_den().get_si();
}

std::int64_t exponent_key(const Rational& e, std::int64_t ram) {
  Rational s = e * Rational(static_cast<long>(ram));
  s.canonicalize();
  if (s.get_den() != 1) throw DomainError("exponent not on the ramification grid");
  if (!s.get_num().fits_slong_p()) throw SizeError("series exponent out of range");
  return s.get_num().get_si();
}

const FieldPtr& common_field(const Puiseux& a, const Puiseux& b) {
  if (a.field() != b.field()) throw DomainError("series over different coefficient fields");
  return a.field();
}

std::string exponent_text(const Rational& e) {
  Rational c = e;
  c.canonicalize();
  if (c.get_den() == 1 && c >= 0) return "^" + c.get_num().get_str();
  return "^(" + c.get_str() + ")";
}

}  // namespace

Puiseux Puiseux::zero(FieldPtr field, Rational trunc, std::int64_t ram) {
  if (ram <= 0) throw DomainError("ramification must be positive");
  trunc.canonicalize();
  return Puiseux(std::move(field), ram, std::move(trunc));
}

Puiseux Puiseux::constant(FieldPtr field, Fq c, Rational trunc) {
  return monomial(std::move(field), c, Rational(0), std::move(trunc));
}

Puiseux Puiseux::monomial(FieldPtr field, Fq c, const Rational& exponent, Rational trunc) {
  Puiseux x = zero(std::move(field), std::move(trunc), denominator_of(exponent));
  x.insert(exponent_key(exponent, x.ram_), c);
  x.drop_unknown();
  return x;
}

void Puiseux::insert(std::int64_t key, Fq c) {
  if (!c.v) return;
  auto [it, fresh] = terms_.emplace(key, c);
  if (!fresh) {
    it->second = field_->add(it->second, c);
    if (!it->second.v) terms_.erase(it);
  }
}

void Puiseux::drop_unknown() {
  const std::int64_t lim = key_limit(trunc_, ram_);
  terms_.erase(terms_.lower_bound(lim), terms_.end());
}

std::optional<Rational> Puiseux::val() const {
  if (terms_.empty()) return std::nullopt;
  return key_exponent(terms_.begin()->first, ram_);
}

Fq Puiseux::leading_coefficient() const { return terms_.empty() ? Fq{0} : terms_.begin()->second; }

Fq Puiseux::coefficient(const Rational& exponent) const {
  if (exponent >= trunc_) throw PrecisionError("coefficient beyond the working precision");
  Rational s = exponent * Rational(static_cast<long>(ram_));
  s.canonicalize();
  if (s.get_den() != 1) return Fq{0};
  auto it = terms_.find(s.get_num().get_si());
  return it == terms_.end() ? Fq{0} : it->second;
}

std::vector<std::pair<Rational, Fq>> Puiseux::terms() const {
  std::vector<std::pair<Rational, Fq>> out;
  for (const auto& [k, c] : terms_) out.emplace_back(key_exponent(k, ram_), c);
  return out;
}

Fq Puiseux::residue() const {
  if (!terms_.empty() && terms_.begin()->first < 0) throw DomainError("residue of a series with a pole");
  if (trunc_ <= 0) throw PrecisionError("constant term beyond the working precision");
  return coefficient(Rational(0));
}

Puiseux Puiseux::truncated(const Rational& t) const {
  Puiseux x = *this;
  if (t < x.trunc_) {
    x.trunc_ = t;
    x.trunc_.canonicalize();
    x.drop_unknown();
  }
  return x;
}

Puiseux Puiseux::with_ram(std::int64_t ram) const {
  if (ram <= 0 || ram % ram_ != 0) throw DomainError("ramification must be a multiple of the current one");
  Puiseux x(field_, ram, trunc_);
  const std::int64_t f = ram / ram_;
  for (const auto& [k, c] : terms_) x.terms_.emplace(checked_mul(k, f), c);
  return x;
}

Puiseux operator+(const Puiseux& a, const Puiseux& b) {
  const auto& field = common_field(a, b);
  const std::int64_t ram = std::lcm(a.ram_, b.ram_);
  Puiseux x(field, ram, std::min(a.trunc_, b.trunc_));
  const std::int64_t fa = ram / a.ram_, fb = ram / b.ram_;
  for (const auto& [k, c] : a.terms_) x.insert(checked_mul(k, fa), c);
  for (const auto& [k, c] : b.terms_) x.insert(checked_mul(k, fb), c);
  x.drop_unknown();
  return x;
}

Puiseux Puiseux::operator-() const {
  Puiseux x = *this;
  for (auto& [k, c] : x.terms_) c = field_->neg(c);
  return x;
}

Puiseux operator-(const Puiseux& a, const Puiseux& b) { return a + (-b); }

Puiseux operator*(const Puiseux& a, const Puiseux& b) {
  const auto& field = common_field(a, b);
  const std::int64_t ram = std::lcm(a.ram_, b.ram_);
  // unknown parts: a_known * eps_b + eps_a * b_known + eps_a * eps_b
  Rational t = a.trunc_ + b.trunc_;
  if (auto va = a.val()) t = std::min(t, Rational(*va + b.trunc_));
  if (auto vb = b.val()) t = std::min(t, Rational(*vb + a.trunc_));
  Puiseux x(field, ram, t);
  x.trunc_.canonicalize();
  const std::int64_t lim = key_limit(x.trunc_, ram);
  const std::int64_t fa = ram / a.ram_, fb = ram / b.ram_;
  const auto& F = *field;
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) {
      const std::int64_t k = checked_add(checked_mul(ka, fa), checked_mul(kb, fb));
      if (k >= lim) break;
      x.insert(k, F.mul(ca, cb));
    }
  return x;
}

Puiseux Puiseux::scaled(Fq c) const {
  Puiseux x(field_, ram_, trunc_);
  for (const auto& [k, v] : terms_) x.insert(k, field_->mul(v, c));
  return x;
}

Puiseux Puiseux::shifted(const Rational& exponent) const {
  const std::int64_t ram = std::lcm(ram_, denominator_of(exponent));
  Puiseux base = with_ram(ram);
  const std::int64_t s = exponent_key(exponent, ram);
  Puiseux x(field_, ram, trunc_ + exponent);
  x.trunc_.canonicalize();
  for (const auto& [k, c] : base.terms_) x.terms_.emplace(checked_add(k, s), c);
  return x;
}

bool operator==(const Puiseux& a, const Puiseux& b) {
  return a.field_ == b.field_ && a.trunc_ == b.trunc_ && a.terms() == b.terms();
}

bool agree_to(const Puiseux& a, const Puiseux& b, const Rational& prec) {
  if (prec > a.trunc_ || prec > b.trunc_) throw PrecisionError("comparison beyond the working precision");
  const auto d = (a - b).val();
  return !d || *d >= prec;
}

Puiseux inv(const Puiseux& x) {
  if (x.terms_.empty()) throw PrecisionError("inverse of a series with no known nonzero term");
  const auto& F = *x.field_;
  const std::int64_t ram = x.ram_;
  const std::int64_t i0 = x.terms_.begin()->first;
  const Rational v = key_exponent(i0, ram);
  Rational t = x.trunc_ - 2 * v;
  t.canonicalize();
  const std::int64_t lim = key_limit(t, ram);
  Puiseux r(x.field_, ram, t);
  if (lim + i0 <= 0) return r;
  const std::size_t K = static_cast<std::size_t>(lim + i0);
  std::vector<Fq> A(K, Fq{0}), B(K, Fq{0});
  for (const auto& [k, c] : x.terms_)
    if (static_cast<std::size_t>(k - i0) < K) A[static_cast<std::size_t>(k - i0)] = c;
  const Fq a0inv = F.inv(A[0]);
  B[0] = a0inv;
  for (std::size_t k = 1; k < K; ++k) {
    Fq s{0};
    for (std::size_t j = 1; j <= k; ++j)
      if (A[j].v && B[k - j].v) s = F.add(s, F.mul(A[j], B[k - j]));
    B[k] = F.neg(F.mul(a0inv, s));
  }
  for (std::size_t k = 0; k < K; ++k) r.insert(static_cast<std::int64_t>(k) - i0, B[k]);
  return r;
}

Puiseux qpower(const Puiseux& x, unsigned k) {
  std::int64_t Q = 1;
  for (unsigned i = 0; i < k; ++i) Q = checked_mul(Q, static_cast<std::int64_t>(x.field_->q()));
  Puiseux r(x.field_, x.ram_, x.trunc_ * Rational(static_cast<long>(Q)));
  r.trunc_.canonicalize();
  for (const auto& [key, c] : x.terms_) r.terms_.emplace(checked_mul(key, Q), x.field_->frobenius(c, k));
  return r;
}

std::string Puiseux::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms()) {
    if (!first) os << " + ";
    first = false;
    os << field_->to_string(c);
    if (e != 0) os << "*u" << (e == 1 ? "" : exponent_text(e));
  }
  if (!first) os << " + ";
  os << "O(u" << exponent_text(trunc_) << ")";
  return os.str();
}

namespace {

struct SeriesParser {
  const FieldPtr& field;
  const std::string& s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("series literal at offset " + std::to_string(pos) + ": " + what);
  }
  bool eat(char c) {
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::int64_t integer() {
    const std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos || !std::isdigit(static_cast<unsigned char>(s[pos - 1]))) fail("expected an integer");
    return std::stoll(s.substr(start, pos - start));
  }
  Rational exponent() {
    if (!eat('^')) return Rational(1);
    if (eat('(')) {
      const std::int64_t num = integer();
      std::int64_t den = 1;
      if (eat('/')) den = integer();
      if (den <= 0) fail("denominator must be positive");
      if (!eat(')')) fail("expected ')'");
      Rational r(static_cast<long>(num), static_cast<unsigned long>(den));
      r.canonicalize();
      return r;
    }
    return Rational(static_cast<long>(integer()));
  }
  Fq coefficient() {
    if (eat('[')) {
      std::vector<std::uint32_t> c;
      do {
        const std::int64_t v = integer();
        const auto p = static_cast<std::int64_t>(field->p());
        c.push_back(static_cast<std::uint32_t>(((v % p) + p) % p));
      } while (eat(','));
      if (!eat(']')) fail("expected ']'");
      if (c.size() > field->degree()) fail("too many tower coordinates");
      return field->from_coords(c);
    }
    return field->from_int(integer());
  }
};

}  // namespace

Puiseux parse_series(const FieldPtr& field, const std::string& text, std::optional<Rational> trunc) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  SeriesParser p{field, s};
  std::vector<std::pair<Rational, Fq>> terms;
  std::optional<Rational> o_term;
  if (s.empty()) p.fail("empty literal");
  while (p.pos < s.size()) {
    bool negative = false;
    if (!terms.empty() || o_term) {
      if (p.eat('-')) {
        negative = true;
      } else if (!p.eat('+')) {
        p.fail("expected '+' or '-'");
      }
    } else if (p.eat('-')) {
      negative = true;
    }
    if (p.eat('O')) {
      if (!p.eat('(') || !p.eat('u')) p.fail("expected O(u^...)");
      o_term = p.exponent();
      if (!p.eat(')')) p.fail("expected ')'");
      continue;
    }
    Fq c = field->one();
    Rational e(0);
    if (p.pos < s.size() && s[p.pos] != 'u') {
      c = p.coefficient();
      if (p.eat('*')) {
        if (!p.eat('u')) p.fail("expected 'u'");
        e = p.exponent();
      }
    } else {
      if (!p.eat('u')) p.fail("expected a term");
      e = p.exponent();
    }
    if (negative) c = field->neg(c);
    terms.emplace_back(e, c);
  }
  if (!o_term && !trunc) throw ParseError("series literal needs an O(u^t) term or an explicit truncation");
  Rational t = o_term ? *o_term : *trunc;
  if (o_term && trunc) t = std::min(t, *trunc);
  std::int64_t ram = 1;
  for (const auto& [e, c] : terms) ram = std::lcm(ram, denominator_of(e));
  Puiseux x = Puiseux::zero(field, t, ram);
  for (const auto& [e, c] : terms) x = x + Puiseux::monomial(field, c, e, t).with_ram(ram);
  return x;
}

PMatrix::PMatrix(std::size_t rows, std::size_t cols, const Puiseux& fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

PMatrix PMatrix::identity(const FieldPtr& field, std::size_t n, const Rational& trunc) {
  PMatrix m(n, n, Puiseux::zero(field, trunc));
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Puiseux::constant(field, field->one(), trunc);
  return m;
}

PMatrix PMatrix::from_fq(const FqMatrix& src, const Rational& trunc) {
  PMatrix m(src.rows(), src.cols(), Puiseux::zero(src.field(), trunc));
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j) m(i, j) = Puiseux::constant(src.field(), src(i, j), trunc);
  return m;
}

PMatrix PMatrix::diagonal(const std::vector<Puiseux>& d) {
  if (d.empty()) throw DimensionError("empty diagonal");
  Rational t = d.front().trunc();
  for (const auto& x : d) t = std::max(t, x.trunc());
  PMatrix m(d.size(), d.size(), Puiseux::zero(d.front().field(), t));
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

PMatrix PMatrix::qpower(unsigned k) const {
  PMatrix m = *this;
  for (auto& x : m.data_) x = depthzero::qpower(x, k);
  return m;
}

PMatrix PMatrix::truncated(const Rational& t) const {
  PMatrix m = *this;
  for (auto& x : m.data_) x = x.truncated(t);
  return m;
}

Rational PMatrix::min_trunc() const {
  Rational t = data_.front().trunc();
  for (const auto& x : data_) t = std::min(t, x.trunc());
  return t;
}

std::optional<Rational> PMatrix::val() const {
  std::optional<Rational> v;
  for (const auto& x : data_)
    if (auto xv = x.val(); xv && (!v || *xv < *v)) v = xv;
  return v;
}

FqMatrix PMatrix::residue() const {
  FqMatrix m(field(), rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).residue();
  return m;
}

PMatrix operator*(const PMatrix& a, const PMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("series matrix product shape mismatch");
  PMatrix m(a.rows(), b.cols(), Puiseux());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Puiseux s = a(i, 0) * b(0, j);
      for (std::size_t k = 1; k < a.cols(); ++k) s = s + a(i, k) * b(k, j);
      m(i, j) = std::move(s);
    }
  return m;
}

PMatrix operator+(const PMatrix& a, const PMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("series matrix sum shape mismatch");
  PMatrix m = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j) + b(i, j);
  return m;
}

PMatrix operator-(const PMatrix& a, const PMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("series matrix difference shape mismatch");
  PMatrix m = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j) - b(i, j);
  return m;
}

PMatrix inverse(const PMatrix& src) {
  const std::size_t n = src.rows();
  if (src.cols() != n) throw DimensionError("inverse of a non-square series matrix");
  PMatrix a = src;
  PMatrix b = PMatrix::identity(src.field(), n, src.min_trunc());
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t r = c; r < n; ++r) {
      auto v = a(r, c).val();
      if (v && (piv == n || *v < *a(piv, c).val())) piv = r;
    }
    if (piv == n) throw PrecisionError("no certifiable pivot in series matrix inverse");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a(c, j), a(piv, j));
      std::swap(b(c, j), b(piv, j));
    }
    const Puiseux pinv = inv(a(c, c));
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) = a(c, j) * pinv;
      b(c, j) = b(c, j) * pinv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c).is_zero()) continue;
      const Puiseux f = a(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) = a(r, j) - f * a(c, j);
        b(r, j) = b(r, j) - f * b(c, j);
      }
    }
  }
  return b;
}

bool agree_to(const PMatrix& a, const PMatrix& b, const Rational& prec) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!agree_to(a(i, j), b(i, j), prec)) return false;
  return true;
}

SigmaLift solve_sigma_lift(const PMatrix& G, const PMatrix& h0, std::size_t max_steps) {
  if (G.rows() != G.cols() || h0.rows() != G.rows() || h0.cols() != G.cols())
    throw DimensionError("sigma lift shape mismatch");
  const std::size_t n = G.rows();
  const PMatrix g_inv = inverse(G);
  SigmaLift out{h0, {}};
  for (std::size_t step = 0; step <= max_steps; ++step) {
    const PMatrix d = out.h * inverse(out.h.qpower()) * g_inv;
    const PMatrix defect = d - PMatrix::identity(d.field(), n, d.min_trunc());
    const auto v = defect.val();
    if (!v) return out;
    if (*v <= 0) throw DomainError("sigma lift: h0 sigma(h0)^{-1} is not congruent to G");
    if (!out.defect_valuations.empty() && *v <= out.defect_valuations.back())
      throw InvariantViolation("defect_increasing", "defect valuation did not increase");
    out.defect_valuations.push_back(*v);
    out.h = inverse(d) * out.h;
  }
  throw InvariantViolation("defect_increasing", "defect did not vanish within the step bound");
}

}  // namespace depthzero
