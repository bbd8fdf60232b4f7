#include "depthzero/root_datum.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "depthzero/errors.hpp"

namespace depthzero {

namespace {

constexpr std::uint64_t kSigmaOrderBound = 100000;

}  // namespace

Rational pairing(const IntVector& alpha, const RatVector& nu) {
  if (alpha.size() != nu.size()) throw DimensionError("pairing length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] != 0) s += static_cast<long>(alpha[i]) * nu[i];
  return s;
}

std::int64_t pairing(const IntVector& alpha, const IntVector& nu) {
  if (alpha.size() != nu.size()) throw DimensionError("pairing length mismatch");
  std::int64_t s = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) s = checked_add(s, checked_mul(alpha[i], nu[i]));
  return s;
}

BasedRootDatum::BasedRootDatum(std::size_t rank, std::vector<IntVector> roots,
                               std::vector<IntVector> coroots, std::vector<std::size_t> simple_roots,
                               IntMatrix sigma)
    : rank_(rank),
      roots_(std::move(roots)),
      coroots_(std::move(coroots)),
      simple_(std::move(simple_roots)),
      sigma_(std::move(sigma)) {
  if (rank_ == 0) throw DomainError("rank must be positive");
  if (roots_.size() != coroots_.size()) throw DimensionError("roots and coroots differ in number");
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    if (roots_[i].size() != rank_ || coroots_[i].size() != rank_)
      throw DimensionError("root or coroot length differs from rank");
    if (pairing(roots_[i], coroots_[i]) != 2)
      throw InvariantViolation("root_coroot_pairing", "<alpha, alpha^vee> != 2 for root " + to_string(roots_[i]));
  }
  for (std::size_t i = 0; i < roots_.size(); ++i)
    for (std::size_t j = i + 1; j < roots_.size(); ++j)
      if (roots_[i] == roots_[j]) throw InvariantViolation("distinct_roots", "repeated root " + to_string(roots_[i]));
  for (auto s : simple_)
    if (s >= roots_.size()) throw DimensionError("simple root index out of range");
  if (sigma_.rows() == 0) sigma_ = IntMatrix::identity(rank_);
  if (sigma_.rows() != rank_ || sigma_.cols() != rank_) throw DimensionError("sigma must be rank x rank");

  // positivity: coefficients in the simple-root basis
  coeffs_.resize(roots_.size());
  positive_.resize(roots_.size());
  if (!roots_.empty()) {
    if (simple_.empty()) throw InvariantViolation("simple_roots", "roots present but no simple roots");
    RatMatrix basis(rank_, simple_.size());
    for (std::size_t k = 0; k < simple_.size(); ++k)
      for (std::size_t j = 0; j < rank_; ++j) basis(j, k) = static_cast<long>(roots_[simple_[k]][j]);
    if (depthzero::rank(basis) != simple_.size())
      throw InvariantViolation("simple_roots", "simple roots are linearly dependent");
    for (std::size_t i = 0; i < roots_.size(); ++i) {
      auto c = solve(basis, to_rational(roots_[i]));
      if (!c) throw InvariantViolation("simple_roots", "root " + to_string(roots_[i]) + " outside the simple-root span");
      bool nonneg = true, nonpos = true;
      IntVector ci;
      for (const auto& x : *c) {
        if (x.get_den() != 1) throw InvariantViolation("simple_roots", "non-integral simple coefficients");
        ci.push_back(x.get_num().get_si());
        if (x < 0) nonneg = false;
        if (x > 0) nonpos = false;
      }
      if (!nonneg && !nonpos)
        throw InvariantViolation("simple_roots", "root " + to_string(roots_[i]) + " is neither positive nor negative");
      coeffs_[i] = std::move(ci);
      positive_[i] = nonneg;
    }
  }

  for (std::size_t k = 0; k < simple_.size(); ++k)
    if (!root_permutation(reflection(simple_[k])))
      throw InvariantViolation("reflection_permutes_roots", "simple reflection does not permute the roots");

  auto perm = root_permutation(sigma_);
  if (!perm) throw InvariantViolation("sigma_preserves_datum", "sigma does not permute the roots");
  for (auto s : simple_)
    if (std::find(simple_.begin(), simple_.end(), (*perm)[s]) == simple_.end())
      throw InvariantViolation("sigma_preserves_datum", "sigma does not permute the simple roots");
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    RatVector image = sigma_ * to_rational(coroots_[i]);
    IntVector ci;
    for (const auto& x : image) ci.push_back(x.get_num().get_si());
    if (ci != coroots_[(*perm)[i]])
      throw InvariantViolation("sigma_preserves_datum", "sigma does not carry coroots along with roots");
  }
  auto ord = matrix_order(sigma_, kSigmaOrderBound);
  if (!ord) throw InvariantViolation("sigma_finite_order", "sigma has no finite order within the search bound");
  sigma_order_ = *ord;

  if (roots_.empty()) {
    for (std::size_t j = 0; j < rank_; ++j) {
      IntVector e(rank_, 0);
      e[j] = 1;
      center_.push_back(e);
    }
  } else {
    RatMatrix a(roots_.size(), rank_);
    for (std::size_t i = 0; i < roots_.size(); ++i)
      for (std::size_t j = 0; j < rank_; ++j) a(i, j) = static_cast<long>(roots_[i][j]);
    for (const auto& v : nullspace(a)) center_.push_back(primitive_integer_vector(v));
  }
}

std::optional<std::size_t> BasedRootDatum::root_index(const IntVector& alpha) const {
  for (std::size_t i = 0; i < roots_.size(); ++i)
    if (roots_[i] == alpha) return i;
  return std::nullopt;
}

std::int64_t BasedRootDatum::height(std::size_t root) const {
  std::int64_t h = 0;
  for (auto c : coeffs_[root]) h += c;
  return h;
}

IntMatrix BasedRootDatum::reflection(std::size_t root) const {
  IntMatrix s = IntMatrix::identity(rank_);
  const auto& a = roots_[root];
  const auto& av = coroots_[root];
  for (std::size_t i = 0; i < rank_; ++i)
    for (std::size_t j = 0; j < rank_; ++j) s(i, j) = checked_add(s(i, j), -checked_mul(av[i], a[j]));
  return s;
}

IntVector BasedRootDatum::act_on_root(const IntMatrix& m, const IntVector& alpha) const {
  // alpha . m^{-1}; solve y m = alpha, i.e. m^T y^T = alpha^T
  auto y = solve(RatMatrix::from_int(m.transpose()), to_rational(alpha));
  if (!y) throw DomainError("lattice map is singular");
  IntVector out;
  for (const auto& x : *y) {
    if (x.get_den() != 1) throw DomainError("lattice map is not unimodular on roots");
    out.push_back(x.get_num().get_si());
  }
  return out;
}

std::optional<std::vector<std::size_t>> BasedRootDatum::root_permutation(const IntMatrix& m) const {
  std::vector<std::size_t> perm(roots_.size());
  std::vector<bool> hit(roots_.size(), false);
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    // beta = alpha m^{-1}  <=>  beta m = alpha; find beta among roots
    bool found = false;
    for (std::size_t j = 0; j < roots_.size() && !found; ++j) {
      if (row_times(roots_[j], m) == roots_[i]) {
        if (hit[j]) return std::nullopt;
        perm[i] = j;
        hit[j] = true;
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  return perm;
}

bool BasedRootDatum::is_central(const RatVector& nu) const {
  for (const auto& a : roots_)
    if (pairing(a, nu) != 0) return false;
  return true;
}

CocharacterClass classify_cocharacter(const BasedRootDatum& datum, const IntVector& mu) {
  CocharacterClass c{true, true};
  for (auto s : datum.simple_roots())
    if (pairing(datum.roots()[s], mu) < 0) c.dominant = false;
  for (const auto& a : datum.roots()) {
    auto v = pairing(a, mu);
    if (v < -1 || v > 1) c.minuscule = false;
  }
  return c;
}

bool is_dominant(const BasedRootDatum& datum, const RatVector& nu) {
  for (auto s : datum.simple_roots())
    if (pairing(datum.roots()[s], nu) < 0) return false;
  return true;
}

std::vector<WeylElement> weyl_group(const BasedRootDatum& datum, std::size_t bound) {
  std::vector<WeylElement> out;
  std::unordered_map<IntMatrix, std::size_t, IntMatrixHash> seen;
  std::vector<IntMatrix> gens;
  for (auto s : datum.simple_roots()) gens.push_back(datum.reflection(s));
  out.push_back({IntMatrix::identity(datum.rank()), {}});
  seen.emplace(out.back().matrix, 0);
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (std::size_t k = 0; k < gens.size(); ++k) {
      IntMatrix next = gens[k] * out[head].matrix;
      if (seen.count(next)) continue;
      if (out.size() >= bound) throw SizeError("Weyl group exceeds the closure bound");
      std::vector<std::size_t> word{k};
      word.insert(word.end(), out[head].word.begin(), out[head].word.end());
      seen.emplace(next, out.size());
      out.push_back({std::move(next), std::move(word)});
    }
  }
  return out;
}

IntVector two_rho(const BasedRootDatum& datum) {
  IntVector s(datum.rank(), 0);
  for (std::size_t i = 0; i < datum.num_roots(); ++i)
    if (datum.is_positive(i))
      for (std::size_t j = 0; j < datum.rank(); ++j) s[j] = checked_add(s[j], datum.roots()[i][j]);
  return s;
}

BasedRootDatum gl_datum(std::size_t n) {
  if (n == 0) throw DomainError("GL_0 is not a group datum");
  std::vector<IntVector> roots, coroots;
  std::vector<std::size_t> simple;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      IntVector a(n, 0);
      a[i] = 1;
      a[j] = -1;
      if (i == j + 1) simple.push_back(roots.size());
      roots.push_back(a);
      coroots.push_back(a);
    }
  // order simple roots as e_2-e_1, e_3-e_2, ...
  std::sort(simple.begin(), simple.end(), [&](std::size_t a, std::size_t b) {
    auto pos = [&](std::size_t r) { return std::find(roots[r].begin(), roots[r].end(), 1) - roots[r].begin(); };
    return pos(a) < pos(b);
  });
  BasedRootDatum d(n, std::move(roots), std::move(coroots), std::move(simple), IntMatrix::identity(n));
  d.mark_gl(n);
  return d;
}

BasedRootDatum torus_datum(std::size_t r) {
  return BasedRootDatum(r, {}, {}, {}, IntMatrix::identity(r));
}

BasedRootDatum product_datum(const std::vector<BasedRootDatum>& factors) {
  std::size_t rank = 0;
  for (const auto& f : factors) rank += f.rank();
  std::vector<IntVector> roots, coroots;
  std::vector<std::size_t> simple;
  IntMatrix sigma(rank, rank);
  std::size_t offset = 0;
  for (const auto& f : factors) {
    const std::size_t base = roots.size();
    for (std::size_t i = 0; i < f.num_roots(); ++i) {
      IntVector a(rank, 0), av(rank, 0);
      for (std::size_t j = 0; j < f.rank(); ++j) {
        a[offset + j] = f.roots()[i][j];
        av[offset + j] = f.coroots()[i][j];
      }
      roots.push_back(a);
      coroots.push_back(av);
    }
    for (auto s : f.simple_roots()) simple.push_back(base + s);
    for (std::size_t i = 0; i < f.rank(); ++i)
      for (std::size_t j = 0; j < f.rank(); ++j) sigma(offset + i, offset + j) = f.sigma()(i, j);
    offset += f.rank();
  }
  return BasedRootDatum(rank, std::move(roots), std::move(coroots), std::move(simple), std::move(sigma));
}

BasedRootDatum cyclic_restriction(const BasedRootDatum& base, std::size_t k) {
  if (k == 0) throw DomainError("restriction degree must be positive");
  std::vector<BasedRootDatum> copies(k, base);
  BasedRootDatum prod = product_datum(copies);
  const std::size_t r = base.rank();
  IntMatrix sigma(r * k, r * k);
  // copy c is carried to copy c+1 (cyclically), composed with base sigma
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t target = (c + 1) % k;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) sigma(target * r + i, c * r + j) = base.sigma()(i, j);
  }
  return BasedRootDatum(r * k, prod.roots(), prod.coroots(), prod.simple_roots(), std::move(sigma));
}

std::vector<IntVector> gl_minuscule_cocharacters(std::size_t n) {
  std::vector<IntVector> out;
  for (std::size_t k = 0; k <= n; ++k) {
    IntVector mu(n, 0);
    for (std::size_t i = 0; i < k; ++i) mu[i] = -1;
    out.push_back(mu);
  }
  return out;
}

}  // namespace depthzero
