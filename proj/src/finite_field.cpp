#include "depthzero/finite_field.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "depthzero/errors.hpp"

namespace depthzero {

namespace {

constexpr std::uint64_t kTableLimit = 1u << 22;

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Polynomial arithmetic over F_p modulo a monic polynomial, digits low first.
struct PolyRing {
  std::uint64_t p;
  std::vector<std::uint32_t> mod;  // c_0..c_{d-1}

  std::vector<std::uint32_t> mul(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) const {
    const std::size_t d = mod.size();
    std::vector<std::uint64_t> prod(2 * d, 0);
    for (std::size_t i = 0; i < d; ++i) {
      if (!a[i]) continue;
      for (std::size_t j = 0; j < d; ++j) prod[i + j] = (prod[i + j] + std::uint64_t(a[i]) * b[j]) % p;
    }
    for (std::size_t k = 2 * d - 1; k >= d; --k) {
      const std::uint64_t c = prod[k];
      if (!c) continue;
      prod[k] = 0;
      // x^d = -sum c_i x^i
      for (std::size_t i = 0; i < d; ++i) prod[k - d + i] = (prod[k - d + i] + (p - c) * mod[i]) % p;
    }
    return std::vector<std::uint32_t>(prod.begin(), prod.begin() + d);
  }

  std::vector<std::uint32_t> pow(std::vector<std::uint32_t> base, std::uint64_t k) const {
    std::vector<std::uint32_t> r(mod.size(), 0);
    r[0] = 1;
    while (k) {
      if (k & 1) r = mul(r, base);
      k >>= 1;
      if (k) base = mul(base, base);
    }
    return r;
  }
};

bool is_one(const std::vector<std::uint32_t>& a) {
  if (a[0] != 1) return false;
  for (std::size_t i = 1; i < a.size(); ++i)
    if (a[i]) return false;
  return true;
}

// x generates the unit group of F_p[x]/(P); implies P irreducible.
bool is_primitive(std::uint64_t p, const std::vector<std::uint32_t>& mod, std::uint64_t order,
                  const std::vector<std::uint64_t>& factors) {
  PolyRing ring{p, mod};
  std::vector<std::uint32_t> x(mod.size(), 0);
  if (mod.size() == 1) {
    x[0] = static_cast<std::uint32_t>((p - mod[0]) % p);
  } else {
    x[1] = 1;
  }
  if (!is_one(ring.pow(x, order))) return false;
  for (auto r : factors)
    if (is_one(ring.pow(x, order / r))) return false;
  return true;
}

}  // namespace

std::shared_ptr<const FiniteField> FiniteField::make(std::uint64_t p, unsigned f, unsigned m) {
  static std::mutex mu;
  static std::map<std::tuple<std::uint64_t, unsigned, unsigned>, std::shared_ptr<const FiniteField>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(p, f, m);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  std::shared_ptr<const FiniteField> field(new FiniteField(p, f, m));
  cache.emplace(key, field);
  return field;
}

FiniteField::FiniteField(std::uint64_t p, unsigned f, unsigned m) : p_(p), f_(f), m_(m) {
  if (!is_prime(p)) throw DomainError("field characteristic must be prime");
  if (f == 0 || m == 0) throw DomainError("field degrees must be positive");
  degree_ = f * m;
  q_ = 1;
  for (unsigned i = 0; i < f; ++i) q_ *= p;
  size_ = 1;
  for (unsigned i = 0; i < degree_; ++i) {
    if (size_ > (std::uint64_t(1) << 32) / p) throw DomainError("field too large for this representation");
    size_ *= p;
  }
  if (size_ >= (std::uint64_t(1) << 32)) throw DomainError("field too large for this representation");

  const auto factors = prime_factors(size_ - 1);
  std::vector<std::uint32_t> cand(degree_, 0);
  bool found = false;
  // enumerate the low coefficients in increasing digit order
  for (std::uint64_t idx = 1; idx < size_ && !found; ++idx) {
    std::uint64_t t = idx;
    for (unsigned i = 0; i < degree_; ++i) {
      cand[i] = static_cast<std::uint32_t>(t % p);
      t /= p;
    }
    if (cand[0] == 0) continue;
    if (is_primitive(p, cand, size_ - 1, factors)) found = true;
  }
  if (!found) throw InvariantViolation("primitive_polynomial", "no primitive polynomial found");
  modulus_ = cand;

  if (size_ <= kTableLimit) {
    const std::uint64_t order = size_ - 1;
    exp_.resize(order);
    log_.assign(size_, 0);
    Fq g = generator();
    Fq cur = one();
    for (std::uint64_t k = 0; k < order; ++k) {
      exp_[k] = cur.v;
      log_[cur.v] = static_cast<std::uint32_t>(k);
      cur = slow_mul(cur, g);
    }
    zech_.assign(order, -1);
    for (std::uint64_t k = 0; k < order; ++k) {
      const Fq s = slow_add(one(), Fq{exp_[k]}, false);
      zech_[k] = s.v == 0 ? -1 : static_cast<std::int64_t>(log_[s.v]);
    }
    tables_ = true;
  }
}

Fq FiniteField::from_int(std::int64_t k) const {
  std::int64_t r = k % static_cast<std::int64_t>(p_);
  if (r < 0) r += static_cast<std::int64_t>(p_);
  return Fq{static_cast<std::uint32_t>(r)};
}

Fq FiniteField::generator() const {
  if (degree_ == 1) return Fq{static_cast<std::uint32_t>((p_ - modulus_[0]) % p_)};
  return Fq{static_cast<std::uint32_t>(p_)};
}

Fq FiniteField::element(std::uint64_t index) const {
  if (index >= size_) throw DomainError("element index out of range");
  return Fq{static_cast<std::uint32_t>(index)};
}

std::vector<std::uint32_t> FiniteField::coords(Fq a) const {
  std::vector<std::uint32_t> c(degree_);
  std::uint64_t t = a.v;
  for (unsigned i = 0; i < degree_; ++i) {
    c[i] = static_cast<std::uint32_t>(t % p_);
    t /= p_;
  }
  return c;
}

Fq FiniteField::from_coords(const std::vector<std::uint32_t>& c) const {
  if (c.size() > degree_) throw DimensionError("too many tower coordinates");
  std::uint64_t v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * p_ + (c[i] % p_);
  return Fq{static_cast<std::uint32_t>(v)};
}

Fq FiniteField::slow_add(Fq a, Fq b, bool subtract) const {
  auto ca = coords(a), cb = coords(b);
  for (unsigned i = 0; i < degree_; ++i)
    ca[i] = static_cast<std::uint32_t>((ca[i] + (subtract ? p_ - cb[i] : cb[i])) % p_);
  return from_coords(ca);
}

Fq FiniteField::slow_mul(Fq a, Fq b) const {
  PolyRing ring{p_, modulus_};
  return from_coords(ring.mul(coords(a), coords(b)));
}

Fq FiniteField::add(Fq a, Fq b) const {
  if (p_ == 2) return Fq{a.v ^ b.v};
  if (!tables_) return slow_add(a, b, false);
  if (a.v == 0) return b;
  if (b.v == 0) return a;
  const std::uint64_t order = size_ - 1;
  const std::uint64_t i = log_[a.v], j = log_[b.v];
  const std::int64_t z = zech_[(j + order - i) % order];
  if (z < 0) return zero();
  return Fq{exp_[(i + static_cast<std::uint64_t>(z)) % order]};
}

Fq FiniteField::neg(Fq a) const {
  if (p_ == 2 || a.v == 0) return a;
  if (!tables_) return slow_add(zero(), a, true);
  const std::uint64_t order = size_ - 1;
  return Fq{exp_[(log_[a.v] + order / 2) % order]};
}

Fq FiniteField::sub(Fq a, Fq b) const { return add(a, neg(b)); }

Fq FiniteField::mul(Fq a, Fq b) const {
  if (a.v == 0 || b.v == 0) return zero();
  if (!tables_) return slow_mul(a, b);
  return Fq{exp_[(std::uint64_t(log_[a.v]) + log_[b.v]) % (size_ - 1)]};
}

Fq FiniteField::inv(Fq a) const {
  if (a.v == 0) throw DomainError("inverse of zero in a finite field");
  if (!tables_) return pow(a, size_ - 2);
  const std::uint64_t order = size_ - 1;
  return Fq{exp_[(order - log_[a.v]) % order]};
}

Fq FiniteField::pow(Fq a, std::uint64_t k) const {
  if (k == 0) return one();
  if (a.v == 0) return zero();
  if (tables_) {
    const std::uint64_t order = size_ - 1;
    const unsigned __int128 e = static_cast<unsigned __int128>(log_[a.v]) * (k % order);
    return Fq{exp_[static_cast<std::uint64_t>(e % order)]};
  }
  Fq r = one();
  while (k) {
    if (k & 1) r = mul(r, a);
    k >>= 1;
    if (k) a = mul(a, a);
  }
  return r;
}

Fq FiniteField::frobenius(Fq a, unsigned k) const {
  for (unsigned i = 0; i < k % m_; ++i) a = pow(a, q_);
  return a;
}

Fq FiniteField::prime_frobenius(Fq a, unsigned k) const {
  for (unsigned i = 0; i < k % degree_; ++i) a = pow(a, p_);
  return a;
}

std::uint64_t FiniteField::log(Fq a) const {
  if (a.v == 0) throw DomainError("logarithm of zero");
  if (!tables_) throw UnsupportedCase("discrete logarithms need the table representation");
  return log_[a.v];
}

Fq FiniteField::root_of_unity(std::uint64_t e) const {
  if (e == 0 || (size_ - 1) % e != 0)
    throw DomainError("F_" + std::to_string(size_) + " has no primitive " + std::to_string(e) + "-th root of unity");
  return pow(generator(), (size_ - 1) / e);
}

std::string FiniteField::to_string(Fq a) const {
  if (a.v < p_) return std::to_string(a.v);
  std::ostringstream os;
  os << '[';
  const auto c = coords(a);
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ']';
  return os.str();
}

}  // namespace depthzero
