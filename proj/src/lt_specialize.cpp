#include "depthzero/lt_specialize.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "depthzero/errors.hpp"

namespace depthzero {

namespace {

Rational valuation(const Puiseux& x) {
  const auto v = x.val();
  if (!v) throw PrecisionError("level coordinate vanishes to the working precision");
  return *v;
}

void require_prime_frobenius(const FieldPtr& field) {
  if (!field) throw DomainError("level vector without a field");
  if (field->f() != 1) throw UnsupportedCase("level structures need q = p");
}

std::vector<std::vector<std::size_t>> index_sets(std::size_t n, std::size_t i) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(i);
  std::iota(cur.begin(), cur.end(), 0);
  if (i > n) return out;
  while (true) {
    out.push_back(cur);
    std::size_t k = i;
    while (k > 0 && cur[k - 1] == n - i + k - 1) --k;
    if (k == 0) break;
    ++cur[k - 1];
    for (std::size_t r = k; r < i; ++r) cur[r] = cur[r - 1] + 1;
  }
  return out;
}

bool odd_permutation(const std::vector<std::size_t>& v) {
  std::size_t inversions = 0;
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b)
      if (v[a] > v[b]) ++inversions;
  return inversions % 2 == 1;
}

FqMatrix leading_rows(const FqEchelon& e) {
  const auto& r = e.reduced;
  FqMatrix out(r.field(), e.pivots.size(), r.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) out(i, j) = r(i, j);
  return out;
}

// Leading coefficients of t[b..e) as columns of a matrix over the prime field.
FqMatrix leading_coordinates(const LevelVector& t, std::size_t b, std::size_t e, const FieldPtr& prime) {
  const auto& F = t.field;
  FqMatrix m(prime, F->degree(), e - b);
  for (std::size_t s = b; s < e; ++s) {
    const auto c = F->coords(t.t[s].leading_coefficient());
    for (std::size_t r = 0; r < c.size(); ++r) m(r, s - b) = Fq{c[r]};
  }
  return m;
}

std::size_t block_end(const LevelVector& t, std::size_t b) {
  const Rational v = valuation(t.t[b]);
  std::size_t e = b + 1;
  while (e < t.n() && valuation(t.t[e]) == v) ++e;
  return e;
}

Puiseux determinant(const std::vector<std::vector<Puiseux>>& rows, const std::vector<std::size_t>& cols) {
  const std::size_t i = cols.size();
  std::vector<std::size_t> perm(i);
  std::iota(perm.begin(), perm.end(), 0);
  Puiseux sum;
  bool first = true;
  do {
    Puiseux term = rows[0][cols[perm[0]]];
    for (std::size_t r = 1; r < i; ++r) term = term * rows[r][cols[perm[r]]];
    if (odd_permutation(perm)) term = -term;
    sum = first ? term : sum + term;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

}  // namespace

void check_level_vector(const LevelVector& z) {
  require_prime_frobenius(z.field);
  if (z.t.empty()) throw DomainError("empty level vector");
  for (const auto& x : z.t) {
    if (x.field() != z.field) throw DomainError("level coordinates over different fields");
    const auto v = x.val();
    if (!v) throw DomainError("level coordinate is zero to the working precision");
    if (*v <= 0) throw DomainError("level coordinate without positive valuation");
  }
}

bool verify_level_equation(const LevelVector& z1, const std::vector<Puiseux>& u_flats, const Puiseux& p_flat) {
  check_level_vector(z1);
  const std::size_t n = z1.n();
  if (u_flats.size() + 1 != n) throw DimensionError("level equation needs n - 1 coefficients u_2..u_n");
  for (const auto& t : z1.t) {
    const Puiseux lhs = p_flat * t;
    Puiseux rhs = qpower(t, static_cast<unsigned>(n));
    for (std::size_t i = 1; i < n; ++i) rhs = rhs + u_flats[i - 1] * qpower(t, static_cast<unsigned>(i));
    const Rational prec = std::min(lhs.trunc(), rhs.trunc());
    const auto lv = lhs.val();
    if (!lv || prec <= *lv) throw PrecisionError("level equation: leading term beyond the working precision");
    if (!agree_to(lhs, rhs, prec)) return false;
  }
  return true;
}

bool is_normalized(const LevelVector& t) {
  check_level_vector(t);
  const auto prime = FiniteField::make(t.field->p(), 1, 1);
  for (std::size_t i = 0; i + 1 < t.n(); ++i)
    if (valuation(t.t[i]) > valuation(t.t[i + 1])) return false;
  for (std::size_t b = 0; b < t.n();) {
    const std::size_t e = block_end(t, b);
    if (rank(leading_coordinates(t, b, e, prime)) != e - b) return false;
    b = e;
  }
  return true;
}

NormalizedLevel normalize_breaks(const LevelVector& input) {
  check_level_vector(input);
  const auto& F = input.field;
  const std::size_t n = input.n();
  const auto prime = FiniteField::make(F->p(), 1, 1);
  LevelVector t = input;
  FqMatrix a = FqMatrix::identity(F, n);
  while (true) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<Rational> vals;
    for (const auto& x : t.t) vals.push_back(valuation(x));
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return vals[x] < vals[y]; });
    LevelVector sorted{F, {}};
    FqMatrix b(F, n, n);
    for (std::size_t k = 0; k < n; ++k) {
      sorted.t.push_back(t.t[order[k]]);
      for (std::size_t r = 0; r < n; ++r) b(r, k) = a(r, order[k]);
    }
    t = sorted;
    a = b;

    bool changed = false;
    for (std::size_t s = 0; s < n && !changed;) {
      const std::size_t e = block_end(t, s);
      const auto kernel = nullspace(leading_coordinates(t, s, e, prime));
      if (!kernel.empty()) {
        auto c = kernel.front();
        std::size_t r = c.size();
        while (c[r - 1].v == 0) --r;
        --r;
        const Fq scale = prime->inv(c[r]);
        for (auto& x : c) x = prime->mul(x, scale);
        Puiseux combo = t.t[s + r];
        std::vector<Fq> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = a(i, s + r);
        for (std::size_t k = 0; k < c.size(); ++k) {
          if (k == r || c[k].v == 0) continue;
          const Fq ck = F->from_int(c[k].v);
          combo = combo + t.t[s + k].scaled(ck);
          for (std::size_t i = 0; i < n; ++i) col[i] = F->add(col[i], F->mul(ck, a(i, s + k)));
        }
        if (combo.is_zero()) throw PrecisionError("normalization eliminated a coordinate to zero");
        t.t[s + r] = combo;
        for (std::size_t i = 0; i < n; ++i) a(i, s + r) = col[i];
        changed = true;
      }
      s = e;
    }
    if (!changed) break;
  }
  return {a, t};
}

BreakData breaks(const LevelVector& t) {
  if (!is_normalized(t)) throw DomainError("break data needs a normalized level vector");
  const auto& F = t.field;
  BreakData bd{F, {0}, {}, {}};
  for (std::size_t b = 0; b < t.n();) {
    const std::size_t e = block_end(t, b);
    bd.breaks.push_back(e);
    bd.lengths.push_back(e - b);
    const Fq last_inv = F->inv(t.t[e - 1].leading_coefficient());
    std::vector<Fq> p;
    for (std::size_t s = b; s < e; ++s) p.push_back(F->mul(t.t[s].leading_coefficient(), last_inv));
    bd.residues.push_back(p);
    b = e;
  }
  return bd;
}

bool sigma_compatible(const FlagPoint& f) {
  for (std::size_t s = 1; s < f.flag.size(); ++s) {
    const FqMatrix& prev = f.flag[s - 1];
    const FqMatrix& cur = f.flag[s];
    const FqMatrix moved = prev.prime_frobenius();
    std::vector<std::vector<Fq>> rows;
    for (std::size_t i = 0; i < cur.rows(); ++i) rows.push_back(cur.row(i));
    for (std::size_t i = 0; i < moved.rows(); ++i) rows.push_back(moved.row(i));
    if (rank(FqMatrix::from_rows(cur.field(), rows)) != cur.rows()) return false;
  }
  return true;
}

FlagPoint flag_from_breaks(const BreakData& bd) {
  require_prime_frobenius(bd.field);
  const auto& F = bd.field;
  const std::size_t n = bd.breaks.back();
  FlagPoint out;
  std::vector<std::vector<Fq>> rows;
  for (std::size_t j = 0; j < bd.lengths.size(); ++j) {
    const std::size_t start = bd.breaks[j];
    for (std::size_t s = 0; s < bd.lengths[j]; ++s) {
      std::vector<Fq> v(n, F->zero());
      for (std::size_t c = 0; c < bd.lengths[j]; ++c)
        v[start + c] = F->prime_frobenius(bd.residues[j][c], static_cast<unsigned>(s));
      rows.push_back(v);
      const auto ech = rref(FqMatrix::from_rows(F, rows));
      if (ech.pivots.size() != rows.size())
        throw InvariantViolation("moore_nonsingular", "Frobenius twists of a residue point are dependent");
      out.flag.push_back(leading_rows(ech));
    }
  }
  return out;
}

std::vector<Fq> plucker(const FqMatrix& rows) {
  std::vector<Fq> out;
  std::vector<std::size_t> idx(rows.rows());
  for (const auto& cols : index_sets(rows.cols(), rows.rows())) {
    FqMatrix sub(rows.field(), rows.rows(), rows.rows());
    for (std::size_t r = 0; r < rows.rows(); ++r)
      for (std::size_t c = 0; c < cols.size(); ++c) sub(r, c) = rows(r, cols[c]);
    out.push_back(det(sub));
  }
  return out;
}

FqMatrix subspace_from_plucker(const FieldPtr& field, std::size_t n, std::size_t i, const std::vector<Fq>& coords) {
  const auto sets = index_sets(n, i);
  if (sets.size() != coords.size()) throw DimensionError("Plucker vector has the wrong length");
  std::map<std::vector<std::size_t>, std::size_t> where;
  for (std::size_t k = 0; k < sets.size(); ++k) where[sets[k]] = k;
  std::size_t pivot = 0;
  while (pivot < coords.size() && coords[pivot].v == 0) ++pivot;
  if (pivot == coords.size()) throw InvariantViolation("plucker_nonzero", "zero wedge vector");
  const auto& base = sets[pivot];
  const Fq base_inv = field->inv(coords[pivot]);
  FqMatrix a(field, i, n);
  for (std::size_t r = 0; r < i; ++r)
    for (std::size_t b = 0; b < n; ++b) {
      auto j = base;
      j[r] = b;
      auto sorted = j;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
      Fq value = field->mul(coords[where.at(sorted)], base_inv);
      if (odd_permutation(j)) value = field->neg(value);
      a(r, b) = value;
    }
  const auto check = plucker(a);
  for (std::size_t k = 0; k < coords.size(); ++k)
    if (check[k] != field->mul(coords[k], base_inv))
      throw InvariantViolation("plucker_decomposable", "wedge vector is not decomposable");
  return leading_rows(rref(a));
}

FlagPoint wedge_oracle(const LevelVector& t) {
  if (!is_normalized(t)) throw DomainError("wedge oracle needs a normalized level vector");
  const std::size_t n = t.n();
  std::vector<std::vector<Puiseux>> z(n);
  for (std::size_t k = 0; k < n; ++k)
    for (const auto& x : t.t) z[k].push_back(qpower(x, static_cast<unsigned>(k)));
  FlagPoint out;
  for (std::size_t i = 1; i <= n; ++i) {
    Puiseux varpi = z[i - 1][0];
    for (std::size_t j = 2; j <= i; ++j) varpi = varpi * z[i - j][j - 1];
    const Puiseux varpi_inv = inv(varpi);
    std::vector<Fq> coords;
    for (const auto& cols : index_sets(n, i)) {
      const Puiseux x = determinant(z, cols) * varpi_inv;
      if (auto v = x.val(); v && *v < 0)
        throw InvariantViolation("orderwedge_integral", "normalized wedge coordinate has a pole");
      coords.push_back(x.residue());
    }
    out.flag.push_back(subspace_from_plucker(t.field, n, i, coords));
  }
  return out;
}

LevelVector random_normalized_level_vector(const FieldPtr& field, std::size_t n, std::mt19937_64& rng,
                                           unsigned precision_scale) {
  require_prime_frobenius(field);
  if (n == 0) throw DomainError("level vectors need n >= 1");
  const std::size_t deg = field->degree();
  std::vector<std::size_t> lengths;
  for (std::size_t left = n; left > 0;) {
    const std::size_t l = 1 + rng() % std::min(left, deg);
    lengths.push_back(l);
    left -= l;
  }
  const long ram = 1 + static_cast<long>(rng() % 3);
  std::vector<long> keys;
  long k = 1 + static_cast<long>(rng() % ram);
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    keys.push_back(k);
    k += 1 + static_cast<long>(rng() % (2 * ram));
  }
  Rational top(keys.back(), ram);
  top.canonicalize();
  const Rational trunc = (3 * top + 3) * Rational(static_cast<long>(precision_scale));
  const auto prime = FiniteField::make(field->p(), 1, 1);

  LevelVector out{field, {}};
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    std::vector<Fq> lead;
    while (true) {
      lead.clear();
      FqMatrix m(prime, deg, lengths[j]);
      for (std::size_t s = 0; s < lengths[j]; ++s) {
        lead.push_back(field->element(1 + rng() % (field->size() - 1)));
        const auto c = field->coords(lead.back());
        for (std::size_t r = 0; r < deg; ++r) m(r, s) = Fq{c[r]};
      }
      if (rank(m) == lengths[j]) break;
    }
    for (const Fq c : lead) {
      Rational v(keys[j], ram);
      v.canonicalize();
      Puiseux x = Puiseux::monomial(field, c, v, trunc);
      for (long key = keys[j] + 1; Rational(key, ram) < trunc; ++key)
        if (rng() % 4 == 0) {
          Rational e(key, ram);
          e.canonicalize();
          x = x + Puiseux::monomial(field, field->element(rng() % field->size()), e, trunc);
        }
      out.t.push_back(x);
    }
  }
  return out;
}

LevelVector transform_level_vector(const LevelVector& t, const FqMatrix& a) {
  const std::size_t n = t.n();
  if (a.rows() != n || a.cols() != n) throw DimensionError("transform does not match the level vector");
  Rational trunc = t.t.front().trunc();
  for (const auto& x : t.t) trunc = std::min(trunc, x.trunc());
  LevelVector out{t.field, {}};
  for (std::size_t j = 0; j < n; ++j) {
    Puiseux x = Puiseux::zero(t.field, trunc);
    for (std::size_t i = 0; i < n; ++i)
      if (a(i, j).v != 0) x = x + t.t[i].scaled(a(i, j));
    out.t.push_back(x);
  }
  return out;
}

LevelStructure lift_yw_point(const DLContext& ctx, const YwPoint& pt, const Rational& trunc,
                             const std::vector<Puiseux>& corrections) {
  const auto& F = ctx.field();
  require_prime_frobenius(F);
  const std::size_t n = ctx.n();
  std::vector<DLContext::Slot> expected;
  for (std::size_t j = 1; j < n; ++j) expected.emplace_back(0, j);
  auto slots = ctx.u_mu_neg_slots();
  std::sort(slots.begin(), slots.end());
  bool cycle = true;
  for (std::size_t i = 0; i < n; ++i) cycle = cycle && ctx.w()((i + 1) % n, i) == F->one();
  if (slots != expected || !cycle) throw UnsupportedCase("level structures are built for the Lubin-Tate datum only");
  if (!corrections.empty() && corrections.size() + 1 != n) throw DimensionError("one correction per U_{mu<0} slot");

  const FqMatrix x = ctx.lang_value(pt.rep);
  PMatrix u = PMatrix::identity(F, n, trunc);
  for (std::size_t j = 1; j < n; ++j) {
    Puiseux y = Puiseux::constant(F, x(0, j), trunc);
    if (!corrections.empty()) {
      const auto& c = corrections[j - 1];
      if (auto v = c.val(); v && *v <= 0) throw DomainError("corrections must have positive valuation");
      y = y + c;
    }
    u(0, j) = y;
  }
  const PMatrix big_x = u * PMatrix::from_fq(ctx.w(), trunc);
  const auto lift = solve_sigma_lift(big_x, PMatrix::from_fq(inverse(pt.rep), trunc));

  const auto& lambda = ctx.lambda().lambda;
  const auto q = static_cast<long>(F->q());
  std::vector<Puiseux> d, sd_inv;
  for (const auto& l : lambda) {
    d.push_back(Puiseux::monomial(F, F->one(), l, trunc + l));
    const Rational ql = l * Rational(q);
    sd_inv.push_back(Puiseux::monomial(F, F->one(), -ql, trunc - ql));
  }
  LevelStructure out;
  out.h = lift.h;
  out.level = PMatrix::diagonal(d) * lift.h;
  // level sigma(level)^{-1} = u^lambda X u^{-q lambda}; its first row carries
  // p^{-1} and p^{-1} u_j
  const PMatrix m = PMatrix::diagonal(d) * big_x * PMatrix::diagonal(sd_inv);
  out.p_flat = inv(m(0, n - 1));
  for (std::size_t j = 1; j < n; ++j) out.u_flats.push_back(out.p_flat * m(0, j - 1));
  out.z1.field = F;
  for (std::size_t c = 0; c < n; ++c) out.z1.t.push_back(out.level(0, c));
  return out;
}

}  // namespace depthzero
