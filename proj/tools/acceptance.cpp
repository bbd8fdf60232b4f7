// Acceptance run: one PASS/FAIL line per criterion, each with a pinned time
// limit. Exit status 0 iff every criterion passes within its limit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "depthzero/alcove.hpp"
#include "depthzero/cartan.hpp"
#include "depthzero/dl_variety.hpp"
#include "depthzero/errors.hpp"
#include "depthzero/lambda_engine.hpp"
#include "depthzero/lt_specialize.hpp"
#include "depthzero/puiseux.hpp"
#include "depthzero/toroidal_fan.hpp"
#include "oracles.hpp"

using namespace depthzero;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::size_t checks = 0;

  void require(bool ok, const std::string& what) {
    ++checks;
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

Rational R(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

IntVector lt_mu(std::size_t n) {
  IntVector mu(n, 0);
  mu[0] = -1;
  return mu;
}

std::uint64_t upow(std::uint64_t b, std::size_t k) {
  std::uint64_t r = 1;
  while (k--) r *= b;
  return r;
}

// |GL_n(F_q)| = q^{n(n-1)/2} prod_{i=1}^n (q^i - 1)
Integer gl_order_formula(std::size_t n, std::uint64_t q) {
  Integer r = 1;
  for (std::size_t i = 1; i <= n; ++i) r *= Integer(static_cast<unsigned long>(upow(q, i) - 1));
  for (std::size_t i = 0; i < n * (n - 1) / 2; ++i) r *= Integer(static_cast<unsigned long>(q));
  return r;
}

// lambda straight from the linear system (1 - q w sigma) lambda = mu
RatVector lambda_by_solving(const ShimuraDatum& sd) {
  const std::size_t r = sd.datum.rank();
  const IntMatrix ws = sd.w.matrix * sd.datum.sigma();
  RatMatrix a(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      a(i, j) = Rational(i == j ? 1 : 0) - Rational(static_cast<long>(sd.q.q * ws(i, j)));
  return *solve(a, to_rational(sd.mu));
}

Integer least_clearing_multiple(const RatVector& v) {
  for (long k = 1;; ++k) {
    bool ok = true;
    for (const auto& x : v)
      if (Rational(x * k).get_den() != 1) ok = false;
    if (ok) return k;
  }
}

ShimuraDatum swapping_datum(std::uint64_t q) {
  return make_shimura_datum(cyclic_restriction(gl_datum(2), 2), q, {-1, 0, -1, 0});
}

std::vector<ShimuraDatum> lambda_suite() {
  std::vector<ShimuraDatum> out;
  for (std::size_t n = 1; n <= 5; ++n)
    for (const auto& mu : gl_minuscule_cocharacters(n))
      for (std::uint64_t q : {2, 3, 4, 5}) out.push_back(make_shimura_datum(gl_datum(n), q, mu));
  out.push_back(swapping_datum(2));
  out.push_back(swapping_datum(3));
  return out;
}

RatVector scaled(const RatVector& v, const Rational& c) {
  RatVector out;
  for (const auto& x : v) out.push_back(x * c);
  return out;
}

bool is_n_cycle(const IntMatrix& w) {
  const std::size_t n = w.rows();
  IntMatrix p = IntMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    p = p * w;
    if (p.is_identity()) return k == n;
  }
  return false;
}

// ---------------------------------------------------------------- 1

Outcome slope_reproduction() {
  Outcome o;
  for (std::uint64_t p : {2, 3})
    for (std::size_t n = 2; n <= 4; ++n) {
      const auto sd = make_shimura_datum(gl_datum(n), p, lt_mu(n));
      const auto ld = compute_lambda(sd);
      IntVector expect;
      for (std::size_t i = 0; i < n; ++i) expect.push_back(static_cast<std::int64_t>(upow(p, i)));
      const std::string tag = "p=" + std::to_string(p) + " n=" + std::to_string(n);
      o.require(ld.e == Integer(static_cast<unsigned long>(upow(p, n) - 1)), tag + ": e");
      o.require(ld.e_lambda == expect, tag + ": e lambda");
      o.require(is_n_cycle(sd.w.matrix), tag + ": w is not an n-cycle");
    }
  return o;
}

// ---------------------------------------------------------------- 2

Outcome lambda_identities() {
  Outcome o;
  std::size_t data = 0;
  for (const auto& sd : lambda_suite()) {
    ++data;
    const auto ld = compute_lambda(sd);
    const std::string tag = "mu=" + to_string(sd.mu) + " q=" + std::to_string(sd.q.q);
    const auto indep = lambda_by_solving(sd);
    o.require(ld.lambda == indep, tag + ": lambda differs from the linear solve");
    const RatVector qwl = scaled(ld.wsigma * indep, Rational(static_cast<long>(sd.q.q)));
    bool eq = true;
    for (std::size_t i = 0; i < indep.size(); ++i) eq = eq && indep[i] - qwl[i] == static_cast<long>(sd.mu[i]);
    o.require(eq, tag + ": lambda - q w sigma lambda != mu");
    bool dom = true;
    for (std::size_t i = 0; i < sd.datum.num_roots(); ++i)
      if (sd.datum.is_positive(i)) dom = dom && pairing(sd.datum.roots()[i], indep) >= 0;
    o.require(dom, tag + ": lambda not dominant");
    const Integer e = least_clearing_multiple(indep);
    o.require(ld.e == e, tag + ": e");
    const Integer qN = ipow(Integer(static_cast<unsigned long>(sd.q.q)), ld.N) - 1;
    o.require(qN % e == 0, tag + ": e does not divide q^N - 1");
    o.require(e % Integer(static_cast<unsigned long>(sd.q.p)) != 0, tag + ": p divides e");
    for (std::size_t i = 0; i < sd.datum.num_roots(); ++i) {
      const auto& a = sd.datum.roots()[i];
      if (pairing(a, sd.mu) >= 0) continue;
      const Rational er = pairing(a, qwl) * Rational(e);
      o.require(er.get_den() == 1 && er > 0, tag + ": e r_alpha not a positive integer");
    }
  }
  o.detail = o.pass ? std::to_string(data) + " data" : o.detail;
  return o;
}

// ---------------------------------------------------------------- 3

// Index of the root (w sigma)(alpha), i.e. beta with (w sigma)^T beta = alpha.
std::size_t root_image(const BasedRootDatum& d, const IntMatrix& ws, std::size_t i) {
  const auto& a = d.roots()[i];
  for (std::size_t j = 0; j < d.num_roots(); ++j) {
    const auto& b = d.roots()[j];
    bool ok = true;
    for (std::size_t c = 0; c < ws.cols() && ok; ++c) {
      std::int64_t s = 0;
      for (std::size_t r = 0; r < ws.rows(); ++r) s += b[r] * ws(r, c);
      ok = s == a[c];
    }
    if (ok) return j;
  }
  throw InvariantViolation("root_image", "w sigma does not permute the roots");
}

Outcome root_sets() {
  Outcome o;
  for (const auto& sd : lambda_suite()) {
    const auto& d = sd.datum;
    const auto lambda = lambda_by_solving(sd);
    const IntMatrix ws = sd.w.matrix * d.sigma();
    std::set<std::size_t> M, N, Nbar, pos, neg;
    for (std::size_t i = 0; i < d.num_roots(); ++i) {
      const auto l = pairing(d.roots()[i], lambda);
      (l == 0 ? M : l > 0 ? N : Nbar).insert(i);
      const auto m = pairing(d.roots()[i], sd.mu);
      if (m > 0) pos.insert(i);
      if (m < 0) neg.insert(i);
    }
    auto img = [&](const std::set<std::size_t>& s) {
      std::set<std::size_t> out;
      for (auto i : s) out.insert(root_image(d, ws, i));
      return out;
    };
    auto meet = [](const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
      std::set<std::size_t> out;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
      return out;
    };
    const std::string tag = "mu=" + to_string(sd.mu) + " q=" + std::to_string(sd.q.q);
    o.require(meet(N, img(Nbar)) == pos, tag + ": Phi(N) cap w sigma Phi(Nbar) != Phi_{mu>0}");
    o.require(img(M) == M, tag + ": w sigma Phi(M) != Phi(M)");
    std::int64_t two_rho_mu = 0;
    for (std::size_t i = 0; i < d.num_roots(); ++i)
      if (d.is_positive(i)) two_rho_mu += pairing(d.roots()[i], sd.mu);
    o.require(static_cast<std::int64_t>(neg.size()) == two_rho_mu, tag + ": |Phi_{mu<0}| != <2 rho, mu>");
    // the library's partition agrees
    const auto ld = compute_lambda(sd);
    auto as_set = [](const std::vector<std::size_t>& v) { return std::set<std::size_t>(v.begin(), v.end()); };
    o.require(as_set(ld.phi_M) == M && as_set(ld.phi_N) == N && as_set(ld.phi_Nbar) == Nbar &&
                  as_set(ld.phi_mu_pos) == pos && as_set(ld.phi_mu_neg) == neg && ld.dim_r == neg.size(),
              tag + ": library root partition differs");
  }
  return o;
}

// ---------------------------------------------------------------- 4

std::vector<FqMatrix> pattern_elements(const FieldPtr& F, std::size_t n, const std::vector<DLContext::Slot>& slots) {
  std::vector<FqMatrix> out;
  std::vector<std::uint64_t> digit(slots.size(), 0);
  while (true) {
    FqMatrix x = FqMatrix::identity(F, n);
    for (std::size_t k = 0; k < slots.size(); ++k) x(slots[k].first, slots[k].second) = F->element(digit[k]);
    out.push_back(x);
    std::size_t pos = 0;
    while (pos < slots.size() && ++digit[pos] == F->size()) digit[pos++] = 0;
    if (pos == slots.size()) break;
  }
  return out;
}

bool in_pattern(const FqMatrix& x, const std::set<DLContext::Slot>& slots) {
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const Fq want = i == j ? Fq{1} : Fq{0};
      if (!slots.count({i, j}) && !(x(i, j) == want)) return false;
    }
  return true;
}

// Every invertible g with sigma(g) = g x, from the F_p-solution space of
// this linear equation in the prime-field coordinates of g.
std::vector<FqMatrix> all_lang_solutions(const FieldPtr& field, const FqMatrix& x) {
  const auto& F = *field;
  const std::size_t n = x.rows(), d = F.degree(), dim = n * n * d;
  const std::uint64_t p = F.p();
  std::vector<Fq> basis;
  for (std::uint64_t b = 1, k = 0; k < d; ++k, b *= p) basis.push_back(F.element(b));
  auto unpack = [&](const std::vector<std::uint64_t>& c) {
    FqMatrix g(field, n, n);
    for (std::size_t e = 0; e < n * n; ++e) {
      std::vector<std::uint32_t> part(c.begin() + e * d, c.begin() + (e + 1) * d);
      g(e / n, e % n) = F.from_coords(part);
    }
    return g;
  };
  // columns of the linear map, then row reduction mod p
  std::vector<std::vector<std::uint64_t>> a(dim, std::vector<std::uint64_t>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    std::vector<std::uint64_t> unit(dim, 0);
    unit[col] = 1;
    const FqMatrix g = unpack(unit);
    const FqMatrix img = g.frobenius() - g * x;
    for (std::size_t e = 0; e < n * n; ++e) {
      const auto c = F.coords(img(e / n, e % n));
      for (std::size_t k = 0; k < d; ++k) a[e * d + k][col] = c[k];
    }
  }
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t col = 0; col < dim && r < dim; ++col) {
    std::size_t piv = r;
    while (piv < dim && a[piv][col] == 0) ++piv;
    if (piv == dim) continue;
    std::swap(a[piv], a[r]);
    std::uint64_t inv = 1;
    while ((a[r][col] * inv) % p != 1) ++inv;
    for (auto& v : a[r]) v = (v * inv) % p;
    for (std::size_t i = 0; i < dim; ++i) {
      if (i == r || a[i][col] == 0) continue;
      const std::uint64_t f = a[i][col];
      for (std::size_t j = 0; j < dim; ++j) a[i][j] = (a[i][j] + (p - f) * a[r][j]) % p;
    }
    pivot_col.push_back(col);
    ++r;
  }
  std::vector<std::size_t> free_cols;
  for (std::size_t col = 0, k = 0; col < dim; ++col) {
    if (k < pivot_col.size() && pivot_col[k] == col)
      ++k;
    else
      free_cols.push_back(col);
  }
  std::vector<FqMatrix> out;
  std::vector<std::uint64_t> digit(free_cols.size(), 0);
  while (true) {
    std::vector<std::uint64_t> c(dim, 0);
    for (std::size_t k = 0; k < free_cols.size(); ++k) c[free_cols[k]] = digit[k];
    for (std::size_t i = 0; i < pivot_col.size(); ++i) {
      std::uint64_t v = 0;
      for (std::size_t k = 0; k < free_cols.size(); ++k) v += a[i][free_cols[k]] * digit[k];
      c[pivot_col[i]] = (p - v % p) % p;
    }
    const FqMatrix g = unpack(c);
    if (det(g).v) out.push_back(g);
    std::size_t pos = 0;
    while (pos < digit.size() && ++digit[pos] == p) digit[pos++] = 0;
    if (pos == digit.size()) break;
  }
  return out;
}

Outcome lang_torsor() {
  Outcome o;
  struct Case {
    std::size_t n;
    std::uint64_t q;
    unsigned m;
    std::uint64_t fiber;
  };
  std::ostringstream summary;
  for (auto c : {Case{2, 2, 1, 6}, Case{2, 2, 2, 6}, Case{2, 3, 2, 48}, Case{3, 2, 1, 168}, Case{3, 2, 2, 168}}) {
    const auto sd = make_shimura_datum(gl_datum(c.n), c.q, lt_mu(c.n));
    const auto ld = compute_lambda(sd);
    const DLContext ctx(sd, ld, c.m);
    const auto& F = ctx.field();
    const std::string tag = "GL_" + std::to_string(c.n) + " q=" + std::to_string(c.q) + " m=" + std::to_string(c.m);
    o.require(gl_order_formula(c.n, c.q) == Integer(static_cast<unsigned long>(c.fiber)), tag + ": order formula");
    std::uint64_t rational = 0;
    enumerate_rational_group(F, c.n, [&](const FqMatrix&) { ++rational; });
    o.require(rational == c.fiber, tag + ": |GL_n(F_q)| by enumeration");

    const auto en = enumerate_Yw(ctx);
    for (const auto& [u, count] : en.fibers) o.require(count == c.fiber, tag + ": fiber size");
    std::set<FqMatrix> reps;
    for (const auto& p : en.points) reps.insert(p.rep);
    o.require(reps.size() == en.points.size(), tag + ": repeated points");

    // definition: classes gN with g^{-1} sigma(g) in N w sigma N, by brute force over GL_n(F_{q^m})
    const auto n_elems = pattern_elements(F, c.n, ctx.n_slots());
    const std::set<DLContext::Slot> n_set(ctx.n_slots().begin(), ctx.n_slots().end());
    std::uint64_t in_cell = 0;
    std::set<FqMatrix> classes;
    bool shortcut_ok = true;
    enumerate_group(F, c.n, [&](const FqMatrix& g) {
      const FqMatrix x = inverse(g) * g.frobenius();
      bool member = false;
      for (const auto& n1 : n_elems)
        if (in_pattern(ctx.w_inv() * inverse(n1) * x, n_set)) {
          member = true;
          break;
        }
      const bool shortcut = ctx.in_u_mu_neg(x * ctx.w_inv());
      if (shortcut && !member) shortcut_ok = false;
      if (!member) return;
      ++in_cell;
      classes.insert(ctx.canonicalize(g).rep);
      if (shortcut && !reps.count(g)) shortcut_ok = false;
    });
    o.require(shortcut_ok, tag + ": shortcut points disagree with the definition");
    o.require(in_cell == n_elems.size() * en.points.size(), tag + ": |cell preimage| != |N| |Y(w)|");
    o.require(classes == reps, tag + ": class representatives differ");
    summary << (summary.tellp() ? ", " : "") << tag << ": " << en.points.size() << " points";
  }
  // fibers over every u in U_{mu<0}(F_{q^m}) counted from the solution spaces,
  // including GL_3 over F_8 where the first points appear
  for (auto c : {Case{2, 2, 2, 6}, Case{2, 3, 2, 48}, Case{3, 2, 2, 168}, Case{3, 2, 3, 168}}) {
    const auto sd = make_shimura_datum(gl_datum(c.n), c.q, lt_mu(c.n));
    const auto ld = compute_lambda(sd);
    const DLContext ctx(sd, ld, c.m);
    const auto& F = ctx.field();
    const std::string tag = "GL_" + std::to_string(c.n) + " q=" + std::to_string(c.q) + " m=" + std::to_string(c.m);
    std::vector<FqMatrix> rational;
    enumerate_rational_group(F, c.n, [&](const FqMatrix& g) { rational.push_back(g); });
    std::size_t nonempty = 0, points = 0;
    for (const auto& u : pattern_elements(F, c.n, ctx.u_mu_neg_slots())) {
      const auto sols = all_lang_solutions(F, u * ctx.w());
      const auto one = lang_preimage(F, u * ctx.w());
      o.require(sols.empty() != one.has_value(), tag + ": preimage existence");
      if (sols.empty()) continue;
      ++nonempty;
      points += sols.size();
      o.require(sols.size() == c.fiber, tag + ": solution count != |GL_n(F_q)|");
      std::set<FqMatrix> orbit, all(sols.begin(), sols.end());
      for (const auto& g0 : rational) orbit.insert(g0 * *one);
      o.require(orbit == all, tag + ": solutions are not one G^sigma orbit");
      for (const auto& g : sols) o.require(ctx.is_point(g), tag + ": solution is not a point");
    }
    if (c.m == 3) o.require(nonempty > 0, tag + ": no points");
    summary << ", " << tag << ": " << points << " points by solution spaces";
  }
  if (o.pass) o.detail = summary.str();
  return o;
}

// ---------------------------------------------------------------- 5

Outcome artin_schreier() {
  Outcome o;
  for (unsigned m : {1u, 2u}) {
    const auto sd = make_shimura_datum(gl_datum(3), 2, lt_mu(3));
    const auto ld = compute_lambda(sd);
    const DLContext ctx(sd, ld, m);
    const auto elems = pattern_elements(ctx.field(), 3, ctx.phi0_slots());
    const std::size_t N = ctx.phi0_slots().size();
    std::set<FqMatrix> image;
    for (const auto& h : elems) {
      FqMatrix cur = h;
      for (std::size_t k = 0; k < N; ++k) cur = ctx.phi_w(cur);
      o.require(cur.is_identity(), "phi_w^N is not trivial");
      const FqMatrix x = h * inverse(ctx.phi_w(h));
      image.insert(x);
      o.require(ctx.solve_artin_schreier(x).h == h, "Artin-Schreier solve does not invert");
    }
    o.require(image.size() == elems.size(), "h -> h phi_w(h)^{-1} is not injective");
    std::set<FqMatrix> all(elems.begin(), elems.end());
    o.require(image == all, "h -> h phi_w(h)^{-1} is not onto");
  }
  return o;
}

// ---------------------------------------------------------------- 6

Outcome actions() {
  Outcome o;
  struct Case {
    std::size_t n;
    std::uint64_t q;
    unsigned m;
    std::size_t stride;
  };
  for (auto c : {Case{2, 2, 2, 1}, Case{2, 3, 2, 1}, Case{3, 2, 2, 97}}) {
    const auto sd = make_shimura_datum(gl_datum(c.n), c.q, lt_mu(c.n));
    const auto ld = compute_lambda(sd);
    const DLContext ctx(sd, ld, c.m);
    const std::string tag = "GL_" + std::to_string(c.n) + " q=" + std::to_string(c.q);
    const auto en = enumerate_Yw(ctx);
    std::set<FqMatrix> pts;
    for (const auto& p : en.points) pts.insert(p.rep);
    std::vector<FqMatrix> rational;
    enumerate_rational_group(ctx.field(), c.n, [&](const FqMatrix& g) { rational.push_back(g); });
    const auto mw = m_wsigma_points(sd, ld, c.m);
    const auto one = FqMatrix::identity(ctx.field(), c.n);
    const bool inertia = (upow(c.q, c.m) - 1) % ld.e.get_ui() == 0;
    for (std::size_t i = 0; i < en.points.size(); i += c.stride) {
      const auto& p = en.points[i];
      std::set<FqMatrix> orbit;
      for (const auto& g0 : rational) orbit.insert(ctx.act(p, g0, one, 0).rep);
      o.require(orbit.size() == rational.size(), tag + ": G^sigma action not free");
      for (std::size_t k = 0; k < mw.elements.size(); ++k) {
        const auto& mm = mw.elements[k];
        const auto& g0 = rational[(i + k) % rational.size()];
        for (std::int64_t tau : {0, 1}) {
          if (tau && !inertia) continue;
          const auto a = ctx.act(ctx.act(p, g0, one, 0), one, mm, tau);
          const auto b = ctx.act(ctx.act(p, one, mm, tau), g0, one, 0);
          o.require(a.rep == b.rep, tag + ": actions do not commute");
          o.require(pts.count(a.rep) == 1, tag + ": action leaves Y(w)");
        }
      }
    }
    if (inertia) {
      const auto& F = *ctx.field();
      const std::uint64_t e = ld.e.get_ui();
      const Fq z = F.root_of_unity(e);
      for (std::int64_t tau = 1; tau <= static_cast<std::int64_t>(e); ++tau) {
        const auto t = ctx.inertia_matrix(tau);
        for (std::size_t j = 0; j < c.n; ++j) {
          const std::int64_t k = tau * static_cast<std::int64_t>(e) * sd.mu[j];
          const Fq zk = F.pow(z, static_cast<std::uint64_t>(((k % static_cast<std::int64_t>(e)) + e) % e));
          o.require(zk == F.one(), tag + ": (zeta^tau)^{e mu} != 1");
          o.require(t(j, j) == F.pow(z, static_cast<std::uint64_t>(tau * ld.e_lambda[j]) % e), tag + ": inertia diagonal");
        }
        for (const auto& x : mw.elements) o.require(x * t == t * x, tag + ": inertia does not commute with M^{w sigma}");
      }
    }
  }
  // |T^{w sigma}| by exhaustive search over diagonal matrices in GL_n(F_{q^n})
  for (auto [n, q] : {std::pair<std::size_t, std::uint64_t>{2, 2}, {3, 2}, {4, 2}, {2, 3}, {3, 3}}) {
    const auto sd = make_shimura_datum(gl_datum(n), q, lt_mu(n));
    const auto ld = compute_lambda(sd);
    const DLContext ctx(sd, ld, static_cast<unsigned>(n));
    const auto& F = ctx.field();
    std::uint64_t fixed = 0;
    std::vector<std::uint64_t> digit(n, 1);
    while (true) {
      FqMatrix t(F, n, n);
      for (std::size_t i = 0; i < n; ++i) t(i, i) = F->element(digit[i]);
      if (ctx.w() * t.frobenius() * ctx.w_inv() == t) ++fixed;
      std::size_t pos = 0;
      while (pos < n && ++digit[pos] == F->size()) digit[pos++] = 1;
      if (pos == n) break;
    }
    const std::string tag = "n=" + std::to_string(n) + " q=" + std::to_string(q);
    o.require(fixed == upow(q, n) - 1, tag + ": |T^{w sigma}| != q^n - 1");
    o.require(m_wsigma_points(sd, ld).order == fixed, tag + ": library M^{w sigma} order");
  }
  return o;
}

// ---------------------------------------------------------------- 7

std::size_t prime_field_rank(const FiniteField& F, const std::vector<Fq>& xs) {
  const std::uint64_t p = F.p();
  std::vector<std::vector<std::uint64_t>> rows;
  for (auto x : xs) {
    auto c = F.coords(x);
    rows.emplace_back(c.begin(), c.end());
  }
  std::size_t r = 0;
  for (std::size_t col = 0; col < F.degree() && r < rows.size(); ++col) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    std::uint64_t inv = 1;
    while ((rows[r][col] * inv) % p != 1) ++inv;
    for (auto& x : rows[r]) x = (x * inv) % p;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col] == 0) continue;
      const std::uint64_t f = rows[i][col];
      for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] = (rows[i][j] + (p - f) * rows[r][j]) % p;
    }
    ++r;
  }
  return r;
}

Outcome moore_criterion() {
  Outcome o;
  std::size_t tuples = 0;
  for (auto [m, nmax] : {std::pair<unsigned, std::size_t>{2, 2}, {3, 3}}) {
    const auto F = FiniteField::make(2, 1, m);
    for (std::size_t n = 1; n <= nmax; ++n) {
      const std::uint64_t total = upow(F->size(), n);
      for (std::uint64_t code = 0; code < total; ++code, ++tuples) {
        std::vector<Fq> a;
        std::uint64_t c = code;
        for (std::size_t j = 0; j < n; ++j, c /= F->size()) a.push_back(F->element(c % F->size()));
        o.require((moore_det(F, a).v != 0) == (prime_field_rank(*F, a) == n),
                  "F_" + std::to_string(F->size()) + " n=" + std::to_string(n) + ": Moore criterion fails");
      }
    }
  }
  if (o.pass) o.detail = std::to_string(tuples) + " tuples";
  return o;
}

// ---------------------------------------------------------------- 8

Outcome oracle_equivalence() {
  Outcome o;
  std::size_t retries = 0;
  for (auto [n, p] : {std::pair<std::size_t, std::uint64_t>{2, 2}, {3, 2}, {2, 3}}) {
    const auto F = FiniteField::make(p, 1, static_cast<unsigned>(n));
    std::mt19937_64 rng(1000 * n + p);
    for (int k = 0; k < 200; ++k) {
      const auto saved = rng;
      auto t = random_normalized_level_vector(F, n, rng);
      FlagPoint wedge;
      try {
        wedge = wedge_oracle(t);
      } catch (const PrecisionError&) {
        ++retries;
        rng = saved;
        t = random_normalized_level_vector(F, n, rng, 2);
        wedge = wedge_oracle(t);
      }
      o.require(is_normalized(t), "generated vector is not normalized");
      o.require(flag_from_breaks(breaks(t)) == wedge,
                "n=" + std::to_string(n) + " q=" + std::to_string(p) + ": flag differs from the wedge oracle");
    }
  }
  if (o.pass) o.detail = "600 vectors, " + std::to_string(retries) + " precision retries";
  return o;
}

// ---------------------------------------------------------------- 9

Puiseux random_series(const FieldPtr& F, std::mt19937_64& rng, std::int64_t ram, std::int64_t lo, const Rational& T,
                      double density) {
  Puiseux x = Puiseux::zero(F, T, ram);
  for (std::int64_t k = lo; R(k, ram) < T; ++k)
    if (std::uniform_real_distribution<double>(0, 1)(rng) < density)
      x = x + Puiseux::monomial(F, F->element(rng() % F->size()), R(k, ram), T);
  return x;
}

FqMatrix random_invertible(const FieldPtr& F, std::size_t n, std::mt19937_64& rng) {
  while (true) {
    FqMatrix m(F, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = F->element(rng() % F->size());
    if (det(m).v) return m;
  }
}

PMatrix random_unipotent_perturbation(const FieldPtr& F, std::size_t n, std::mt19937_64& rng, std::int64_t ram,
                                      const Rational& T) {
  PMatrix m = PMatrix::identity(F, n, T);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = m(i, j) + random_series(F, rng, ram, 1, T, 0.3);
  return m;
}

bool strictly_increasing(const std::vector<Rational>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

Outcome sigma_lift() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::size_t instances = 0;
  for (auto [p, m, n] : {std::tuple<std::uint64_t, unsigned, std::size_t>{2, 2, 2}, {3, 1, 2}, {2, 3, 3}, {3, 2, 2}, {5, 1, 3}})
    for (int t = 0; t < 20; ++t, ++instances) {
      const auto F = FiniteField::make(p, 1, m);
      const Rational T = 6;
      const std::int64_t ram = 1 + static_cast<std::int64_t>(rng() % 3);
      const auto h0 = random_invertible(F, n, rng);
      const FqMatrix g0 = h0 * inverse(h0.frobenius());
      const PMatrix G = PMatrix::from_fq(g0, T) * random_unipotent_perturbation(F, n, rng, ram, T);
      const auto res = solve_sigma_lift(G, PMatrix::from_fq(h0, T));
      const Rational P = res.h.min_trunc() - 1;
      o.require(agree_to(res.h * inverse(res.h.qpower()), G, P), "h sigma(h)^{-1} != G");
      o.require(res.h.residue() == h0, "h does not reduce to h0");
      o.require(strictly_increasing(res.defect_valuations), "defect valuation does not increase");
    }
  // GL_1: h = c u^{-s/(q-1)} prod_k sigma^k(1 + y) solves h sigma(h)^{-1} = c^{1-q} u^s (1 + y)
  std::size_t closed_forms = 0;
  for (auto [p, m] : {std::pair<std::uint64_t, unsigned>{2, 2}, {3, 1}, {3, 2}, {5, 1}})
    for (int t = 0; t < 10; ++t, ++closed_forms) {
      const auto K = FiniteField::make(p, 1, m);
      const std::uint64_t q = K->q();
      const Rational P = 6;
      const auto y = random_series(K, rng, 2, 1, P, 0.5);
      const long s = static_cast<long>(rng() % 3) - 1;
      Fq c{0};
      while (!c.v) c = K->element(rng() % K->size());
      const Rational shift = R(-s, static_cast<long>(q - 1));
      Puiseux closed = Puiseux::monomial(K, c, shift, P + shift);
      const Puiseux factor = Puiseux::constant(K, K->one(), P) + y;
      for (unsigned k = 0; R(static_cast<long>(upow(q, k)), 2) < P + 2; ++k) closed = closed * qpower(factor, k);
      const Fq lead = K->mul(c, K->inv(K->frobenius(c)));
      const PMatrix Gm(1, 1, Puiseux::monomial(K, lead, R(s), P + s) * factor);
      const PMatrix h0m(1, 1, Puiseux::monomial(K, c, shift, P + shift));
      const auto res = solve_sigma_lift(Gm, h0m);
      const Rational cmp = std::min(res.h.min_trunc(), closed.trunc()) - 1;
      o.require(agree_to(res.h(0, 0), closed, cmp), "GL_1 closed form differs");
      o.require(strictly_increasing(res.defect_valuations), "GL_1 defect valuation does not increase");
    }
  if (o.pass) o.detail = std::to_string(instances) + " lifts, " + std::to_string(closed_forms) + " GL_1 closed forms";
  return o;
}

// ---------------------------------------------------------------- 10

bool in_sigma_by_chain(const RatVector& a, std::size_t ell) {
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    if (i + 1 != ell && a[i] > a[i + 1]) return false;
  if (ell >= 1 && a[ell - 1] > 0) return false;
  if (ell < a.size() && a[ell] < 0) return false;
  return true;
}

Outcome fan_suite() {
  Outcome o;
  std::mt19937_64 rng(10);
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto fan = kgl_fan(n);
    const std::string tag = "n=" + std::to_string(n);
    o.require(fan.cones.size() == oracle::factorial(n) * (n + 1), tag + ": number of maximal cones");
    o.require(weyl_stable(fan), tag + ": not W-stable");
    for (const auto& c : fan.cones) o.require(double_description_consistent(c), tag + ": double description");
    o.require(faces_consistent(fan), tag + ": faces");
    for (int t = 0; t < 1000; ++t) {
      RatVector v;
      for (std::size_t i = 0; i < n; ++i) v.push_back(R(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 3)));
      const auto face = locate(fan, v);
      o.require(cone_contains(face, v), tag + ": located cone misses the vector");
      std::size_t containing = 0;
      for (const auto& c : fan.cones) {
        if (!cone_contains(c, v)) continue;
        ++containing;
        const std::set<IntVector> gens(c.generators.begin(), c.generators.end());
        for (const auto& g : face.generators) o.require(gens.count(g) == 1, tag + ": located face not minimal");
      }
      o.require(containing >= 1, tag + ": vector outside the support");
      for (std::size_t ell = 0; ell <= n; ++ell)
        o.require(cone_contains(sigma_cone(n, ell), v) == in_sigma_by_chain(v, ell), tag + ": sigma cone inequalities");
    }
  }
  using S = std::set<IntVector>;
  auto gens = [](std::size_t ell) { const auto c = sigma_cone(2, ell); return S(c.generators.begin(), c.generators.end()); };
  auto ineqs = [](std::size_t ell) { const auto c = sigma_cone(2, ell); return S(c.inequalities.begin(), c.inequalities.end()); };
  // sigma_0: 0 <= a_1 <= a_2, sigma_1: a_1 <= 0 <= a_2, sigma_2: a_1 <= a_2 <= 0
  o.require(ineqs(0) == S{{1, 0}, {-1, 1}} && gens(0) == S{{0, 1}, {1, 1}}, "n=2 sigma_0");
  o.require(ineqs(1) == S{{-1, 0}, {0, 1}} && gens(1) == S{{-1, 0}, {0, 1}}, "n=2 sigma_1");
  o.require(ineqs(2) == S{{-1, 1}, {0, -1}} && gens(2) == S{{-1, 0}, {-1, -1}}, "n=2 sigma_2");

  std::size_t done = 0, skipped = 0;
  std::mt19937_64 crng(12);
  const std::tuple<std::uint64_t, unsigned, std::size_t, std::int64_t> shapes[] = {
      {2, 2, 2, 3}, {2, 2, 3, 3}, {3, 1, 2, 2}, {3, 1, 3, 1}, {2, 3, 4, 1}};
  for (std::size_t k = 0; done < 500 && skipped < 100; ++k) {
    const auto [p, m, n, ram] = shapes[k % 5];
    const auto F = FiniteField::make(p, 1, m);
    const Rational T = 5;
    PMatrix g(n, n, Puiseux::zero(F, T));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = random_series(F, crng, ram, -ram, T, 0.4);
    CartanDecomposition cd;
    try {
      cd = cartan_decompose(g);
    } catch (const PrecisionError&) {
      ++skipped;
      continue;
    }
    ++done;
    const auto back = cd.g1 * cd.t() * cd.g2;
    o.require(agree_to(back, g, std::min(back.min_trunc(), g.min_trunc())), "Cartan factors do not reassemble");
    o.require(det(cd.g1.residue()).v != 0 && det(cd.g2.residue()).v != 0, "Cartan factor not unimodular");
    o.require(std::is_sorted(cd.exponents.begin(), cd.exponents.end()), "Cartan exponents not sorted");
  }
  o.require(done == 500, "fewer than 500 Cartan decompositions within precision");
  if (o.pass) o.detail = "500 Cartan reassemblies, " + std::to_string(skipped) + " inputs below precision skipped";
  return o;
}

// ---------------------------------------------------------------- 11

// dim of the w sigma-fixed part of X_*(Z_M) modulo X_*(Z_G), over Q
std::size_t anisotropy_defect(const BasedRootDatum& d, const IntMatrix& ws, const RatVector& lambda) {
  const std::size_t r = d.rank();
  auto fixed_dim = [&](bool levi_only) {
    std::vector<RatVector> rows;
    for (const auto& a : d.roots())
      if (!levi_only || pairing(a, lambda) == 0) rows.push_back(to_rational(a));
    for (std::size_t i = 0; i < r; ++i) {
      RatVector row(r, Rational(0));
      for (std::size_t j = 0; j < r; ++j) row[j] = Rational(static_cast<long>(ws(i, j))) - Rational(i == j ? 1 : 0);
      rows.push_back(row);
    }
    return nullspace(RatMatrix::from_rows(rows, r)).size();
  };
  return fixed_dim(true) - fixed_dim(false);
}

Outcome arithmetic_invariants() {
  Outcome o;
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto sd = make_shimura_datum(gl_datum(n), 2, lt_mu(n));
    const std::string tag = "n=" + std::to_string(n);
    std::vector<Integer> expect(n - 1, Integer(1));
    expect.push_back(0);
    const IntMatrix one_minus_w = IntMatrix::identity(n) - sd.w.matrix;
    o.require(oracle::invariant_factors(one_minus_w) == expect, tag + ": Smith oracle");
    o.require(component_group(sd.datum, sd.w.matrix) == expect, tag + ": component group");
    const auto wd = weil_d(sd);
    o.require(wd.d == n && wd.mu_d == IntVector(n, -1), tag + ": Weil integer");
    IntMatrix wn = IntMatrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
      wn = wn * sd.w.matrix;
      o.require(wn.is_identity() == (k == n), tag + ": order of w");
    }
    const auto ld = compute_lambda(sd);
    o.require(anisotropy_defect(sd.datum, ld.wsigma, ld.lambda) == 0, tag + ": kernel oracle for Lubin-Tate");
    o.require(facet_is_minimal(sd.datum, sd.w.matrix, ld.lambda), tag + ": Lubin-Tate facet not minimal");
    const auto z = make_shimura_datum(gl_datum(n), 2, IntVector(n, 0));
    const auto lz = compute_lambda(z);
    o.require(anisotropy_defect(z.datum, lz.wsigma, lz.lambda) == 0, tag + ": kernel oracle for mu = 0");
    o.require(facet_is_minimal(z.datum, z.w.matrix, lz.lambda), tag + ": mu = 0 facet not minimal");
  }
  const auto sw = swapping_datum(2);
  const auto ls = compute_lambda(sw);
  o.require(anisotropy_defect(sw.datum, ls.wsigma, ls.lambda) > 0, "swapping datum: kernel oracle");
  o.require(!facet_is_minimal(sw.datum, sw.w.matrix, ls.lambda), "swapping datum reported minimal");
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "slope data e, e lambda for Lubin-Tate", 1, slope_reproduction},
      {2, "lambda identities over the suite", 5, lambda_identities},
      {3, "root-set identities", 5, root_sets},
      {4, "Lang torsor fibers", 120, lang_torsor},
      {5, "phi_w nilpotence and Artin-Schreier bijection", 60, artin_schreier},
      {6, "group actions, inertia, |T^{w sigma}|", 120, actions},
      {7, "Moore criterion", 10, moore_criterion},
      {8, "specialization oracle equivalence", 60, oracle_equivalence},
      {9, "sigma-lift solver", 60, sigma_lift},
      {10, "fan suite and Cartan decomposition", 120, fan_suite},
      {11, "arithmetic invariants", 10, arithmetic_invariants},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= c.limit_s) {
      o.pass = false;
      o.detail = "time limit exceeded";
    }
    all = all && o.pass;
    std::printf("criterion %2d %s  %s (%.2f s, limit %.0f s, %zu checks)%s%s\n", c.id, o.pass ? "PASS" : "FAIL", c.title,
                secs, c.limit_s, o.checks, o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
