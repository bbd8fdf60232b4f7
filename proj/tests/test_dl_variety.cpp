#include <algorithm>
#include <cstdlib>
#include <random>
#include <set>

#include "depthzero/dl_variety.hpp"
#include "depthzero/errors.hpp"
#include "doctest.h"

using namespace depthzero;

namespace {

struct Setup {
  ShimuraDatum sd;
  LambdaData ld;
  Setup(std::size_t n, std::uint64_t q, IntVector mu)
      : sd(make_shimura_datum(gl_datum(n), q, std::move(mu))), ld(compute_lambda(sd)) {}
};

IntVector lt_mu(std::size_t n) {
  IntVector mu(n, 0);
  mu[0] = -1;
  return mu;
}

// Every element of the pattern group I + span(slots) over the context field.
std::vector<FqMatrix> pattern_elements(const DLContext& ctx, const std::vector<DLContext::Slot>& slots) {
  std::vector<FqMatrix> out;
  const auto& F = ctx.field();
  std::vector<std::uint64_t> digit(slots.size(), 0);
  while (true) {
    FqMatrix x = FqMatrix::identity(F, ctx.n());
    for (std::size_t k = 0; k < slots.size(); ++k) x(slots[k].first, slots[k].second) = F->element(digit[k]);
    out.push_back(x);
    std::size_t pos = 0;
    while (pos < slots.size() && ++digit[pos] == F->size()) digit[pos++] = 0;
    if (pos == slots.size()) break;
  }
  return out;
}

FqMatrix random_pattern(const DLContext& ctx, const std::vector<DLContext::Slot>& slots, std::mt19937_64& rng) {
  FqMatrix x = FqMatrix::identity(ctx.field(), ctx.n());
  for (auto [i, j] : slots) x(i, j) = ctx.field()->element(rng() % ctx.field()->size());
  return x;
}

// Norm x sigma(x) ... sigma^{m-1}(x), computed directly.
FqMatrix norm(const FqMatrix& x, unsigned m) {
  FqMatrix r = FqMatrix::identity(x.field(), x.rows());
  for (unsigned k = 0; k < m; ++k) r = r * x.frobenius(k);
  return r;
}

// Number of u in U_{mu<0}(F_{q^m}) whose Lang fiber has rational points.
std::uint64_t nonempty_fibers_by_norm(const DLContext& ctx) {
  std::uint64_t c = 0;
  for (const auto& u : pattern_elements(ctx, ctx.u_mu_neg_slots()))
    if (norm(u * ctx.w(), ctx.level()).is_identity()) ++c;
  return c;
}

}  // namespace

TEST_CASE("root sets of the unipotent groups") {
  Setup s3(3, 2, lt_mu(3));
  DLContext c3(s3.sd, s3.ld, 1);
  CHECK(c3.phi0_slots() == std::vector<DLContext::Slot>{{2, 1}});
  CHECK(c3.u_mu_neg_slots() == std::vector<DLContext::Slot>{{0, 1}, {0, 2}});

  Setup s4(4, 2, lt_mu(4));
  DLContext c4(s4.sd, s4.ld, 1);
  CHECK(c4.phi0_slots() == std::vector<DLContext::Slot>{{2, 1}, {3, 1}, {3, 2}});

  // U_{mu<0} = Nbar cap Ad(w sigma)(N) across every minuscule GL_n datum
  for (std::size_t n = 1; n <= 5; ++n)
    for (const auto& mu : gl_minuscule_cocharacters(n))
      for (std::uint64_t q : {2, 3}) {
        Setup s(n, q, mu);
        DLContext c(s.sd, s.ld, 1);
        CHECK(c.u_mu_neg_slots() == c.kernel_slots());
      }
}

TEST_CASE("Lang torsor fibers") {
  struct Case {
    std::size_t n;
    std::uint64_t q;
    unsigned m;
    std::uint64_t fiber;
  };
  for (auto c : {Case{2, 2, 1, 6}, Case{2, 2, 2, 6}, Case{2, 3, 2, 48}, Case{3, 2, 1, 168}, Case{3, 2, 2, 168}}) {
    Setup s(c.n, c.q, lt_mu(c.n));
    DLContext ctx(s.sd, s.ld, c.m);
    const auto en = enumerate_Yw(ctx);
    for (const auto& [u, count] : en.fibers) {
      CHECK(count == c.fiber);
      CHECK(ctx.in_u_mu_neg(u));
    }
    CHECK(en.points.size() % c.fiber == 0);
    CHECK(en.fibers.size() == nonempty_fibers_by_norm(ctx));
    // w != 1 here, so no rational points
    if (c.m == 1) CHECK(en.points.empty());
  }
}

TEST_CASE("rational points for central mu") {
  for (auto [n, q] : {std::pair<std::size_t, std::uint64_t>{2, 2}, {2, 3}, {3, 2}}) {
    Setup s(n, q, IntVector(n, 0));
    DLContext ctx(s.sd, s.ld, 1);
    const auto en = enumerate_Yw(ctx);
    CHECK(Integer(static_cast<unsigned long>(en.points.size())) == gl_group_order(n, q));
    REQUIRE(en.fibers.size() == 1);
    CHECK(en.fibers.begin()->first.is_identity());
  }
}

TEST_CASE("Lang preimages") {
  Setup s(3, 2, lt_mu(3));
  DLContext ctx(s.sd, s.ld, 2);
  const auto en = enumerate_Yw(ctx);
  std::set<FqMatrix> pts;
  for (const auto& p : en.points) pts.insert(p.rep);
  std::size_t found = 0;
  for (const auto& u : pattern_elements(ctx, ctx.u_mu_neg_slots())) {
    const auto g = lang_preimage(ctx.field(), u * ctx.w());
    CHECK(g.has_value() == (en.fibers.count(u) > 0));
    if (!g) continue;
    ++found;
    CHECK(ctx.lang_value(*g) == u);
    CHECK(pts.count(*g) == 1);
  }
  CHECK(found == en.fibers.size());
}

TEST_CASE("phi_w is nilpotent and Artin-Schreier is bijective") {
  for (auto [n, m] : {std::pair<std::size_t, unsigned>{3, 1}, {3, 2}, {4, 1}, {4, 2}}) {
    Setup s(n, 2, lt_mu(n));
    DLContext ctx(s.sd, s.ld, m);
    const auto elems = pattern_elements(ctx, ctx.phi0_slots());
    std::set<FqMatrix> image;
    std::size_t max_order = 0;
    for (const auto& h : elems) {
      FqMatrix cur = h;
      std::size_t k = 0;
      while (!cur.is_identity()) {
        cur = ctx.phi_w(cur);
        ++k;
        REQUIRE(k <= ctx.phi0_slots().size());
      }
      max_order = std::max(max_order, k);
      const FqMatrix x = h * inverse(ctx.phi_w(h));
      image.insert(x);
      CHECK(ctx.solve_artin_schreier(x).h == h);
    }
    CHECK(image.size() == elems.size());
    if (n == 3) CHECK(max_order == 1);
    if (n == 4) CHECK(max_order == 2);
  }
}

TEST_CASE("pi_w is a homomorphism") {
  std::mt19937_64 rng(3);
  Setup s(4, 2, lt_mu(4));
  DLContext ctx(s.sd, s.ld, 2);
  for (int t = 0; t < 200; ++t) {
    const auto a = random_pattern(ctx, ctx.wn_slots(), rng), b = random_pattern(ctx, ctx.wn_slots(), rng);
    CHECK(ctx.pi_w(a * b) == ctx.pi_w(a) * ctx.pi_w(b));
  }
  CHECK_THROWS_AS(ctx.pi_w(root_group_element(4, 1, 0, ctx.field()->one(), ctx.field())), DomainError);
  CHECK_THROWS_AS(ctx.phi_w(root_group_element(4, 0, 1, ctx.field()->one(), ctx.field())), DomainError);
}

TEST_CASE("canonical representatives of G/N classes") {
  std::mt19937_64 rng(5);
  for (auto [n, q] : {std::pair<std::size_t, std::uint64_t>{2, 2}, {2, 3}, {3, 2}}) {
    Setup s(n, q, lt_mu(n));
    DLContext ctx(s.sd, s.ld, 2);
    const auto en = enumerate_Yw(ctx);
    for (std::size_t i = 0; i < en.points.size(); i += (n == 3 ? 37 : 1)) {
      const auto& p = en.points[i];
      CHECK(ctx.canonicalize(p.rep).rep == p.rep);
      const auto u = random_pattern(ctx, ctx.n_slots(), rng);
      CHECK(ctx.canonicalize(p.rep * u).rep == p.rep);
    }
    CHECK_THROWS_AS(ctx.canonicalize(FqMatrix::identity(ctx.field(), n)), DomainError);
  }
}

TEST_CASE("group actions on points") {
  for (auto [q, m] : {std::pair<std::uint64_t, unsigned>{2, 2}, {3, 2}}) {
    Setup s(2, q, lt_mu(2));
    DLContext ctx(s.sd, s.ld, m);
    const auto en = enumerate_Yw(ctx);
    std::set<FqMatrix> pts;
    for (const auto& p : en.points) pts.insert(p.rep);
    std::vector<FqMatrix> rational;
    enumerate_rational_group(ctx.field(), 2, [&](const FqMatrix& g) { rational.push_back(g); });
    const auto mw = m_wsigma_points(s.sd, s.ld, m);
    CHECK(mw.order == q * q - 1);
    const auto one = FqMatrix::identity(ctx.field(), 2);

    for (std::size_t i = 0; i < en.points.size(); i += 3) {
      const auto& p = en.points[i];
      std::set<FqMatrix> orbit;
      for (const auto& g0 : rational) {
        const auto moved = ctx.act(p, g0, one, 0);
        CHECK(ctx.lang_value(moved.rep) == ctx.lang_value(p.rep));
        orbit.insert(moved.rep);
      }
      CHECK(orbit.size() == rational.size());
      for (std::size_t k = 0; k < mw.elements.size(); k += 2)
        for (std::int64_t tau : {0, 1, 5}) {
          const auto& mm = mw.elements[k];
          const auto& g0 = rational[(i + k) % rational.size()];
          const auto a = ctx.act(ctx.act(p, g0, one, 0), one, mm, tau);
          const auto b = ctx.act(ctx.act(p, one, mm, tau), g0, one, 0);
          CHECK(a.rep == b.rep);
          CHECK(pts.count(a.rep) == 1);
        }
    }
    CHECK_THROWS_AS(ctx.act(en.points[0], FqMatrix::from_rows(ctx.field(), {{ctx.field()->generator(), {}}, {{}, ctx.field()->one()}}), one, 0),
                    DomainError);
  }
}

TEST_CASE("inertia element") {
  for (auto [n, q, m] : {std::tuple<std::size_t, std::uint64_t, unsigned>{2, 2, 2}, {2, 3, 2}, {3, 2, 3}, {3, 3, 3}, {4, 2, 4}}) {
    Setup s(n, q, lt_mu(n));
    DLContext ctx(s.sd, s.ld, m);
    const auto& F = *ctx.field();
    const Fq z = F.root_of_unity(s.ld.e.get_ui());
    for (std::int64_t tau : {1, 2, -1, 7}) {
      const auto t = ctx.inertia_matrix(tau);
      CHECK(ctx.ad_wsigma(t) == t);
      // (ζ^tau)^{e mu} = 1
      for (std::size_t i = 0; i < n; ++i)
        CHECK(F.pow(z, static_cast<std::uint64_t>(std::abs(tau * s.sd.mu[i])) * s.ld.e.get_ui()) == F.one());
      const auto inv_elem = inertia_torus_element(ctx.field(), s.ld, tau);
      for (std::size_t i = 0; i < n; ++i) CHECK(F.mul(inv_elem[i], t(i, i)) == F.one());
    }
    if (n <= 3) {
      const auto mw = m_wsigma_points(s.sd, s.ld, m);
      const auto t = ctx.inertia_matrix(1);
      for (const auto& x : mw.elements) CHECK(x * t == t * x);
    }
  }
}

TEST_CASE("inertia acts on points over F_8") {
  Setup s(3, 2, lt_mu(3));
  DLContext ctx(s.sd, s.ld, 3);
  std::mt19937_64 rng(9);
  std::vector<FqMatrix> rational;
  enumerate_rational_group(ctx.field(), 3, [&](const FqMatrix& g) { rational.push_back(g); });
  std::vector<FqMatrix> seeds;
  for (const auto& u : pattern_elements(ctx, ctx.u_mu_neg_slots()))
    if (auto g = lang_preimage(ctx.field(), u * ctx.w())) seeds.push_back(*g);
  REQUIRE(!seeds.empty());
  const auto one = FqMatrix::identity(ctx.field(), 3);
  for (int t = 0; t < 12; ++t) {
    const YwPoint p{rational[rng() % rational.size()] * seeds[t % seeds.size()], 3};
    REQUIRE(ctx.is_point(p.rep));
    for (std::int64_t tau = 1; tau < 7; ++tau) {
      const auto moved = ctx.act(p, one, one, tau);
      CHECK(ctx.is_point(moved.rep));
      CHECK(!(moved.rep == p.rep));
      const auto& g0 = rational[rng() % rational.size()];
      CHECK(ctx.act(ctx.act(p, g0, one, 0), one, one, tau).rep == ctx.act(moved, g0, one, 0).rep);
    }
    CHECK(ctx.act(p, one, one, 7).rep == p.rep);
  }
}

TEST_CASE("T^{w sigma} for Lubin-Tate") {
  for (auto [n, q] : {std::pair<std::size_t, std::uint64_t>{2, 2}, {2, 3}, {3, 2}, {3, 3}, {4, 2}}) {
    Setup s(n, q, lt_mu(n));
    const auto mw = m_wsigma_points(s.sd, s.ld);
    std::uint64_t expect = 1;
    for (std::size_t i = 0; i < n; ++i) expect *= q;
    CHECK(mw.order == expect - 1);
    CHECK(Integer(static_cast<unsigned long>(mw.order)) == *m_wsigma_order(s.sd, s.ld));
  }
  Setup s(3, 2, {-1, -1, 0});
  CHECK(Integer(static_cast<unsigned long>(m_wsigma_points(s.sd, s.ld).order)) == *m_wsigma_order(s.sd, s.ld));
}

TEST_CASE("Weil shadow permutes the points") {
  for (auto [n, q] : {std::pair<std::size_t, std::uint64_t>{2, 2}, {2, 3}, {3, 2}}) {
    Setup s(n, q, lt_mu(n));
    DLContext ctx(s.sd, s.ld, 2);
    const auto en = enumerate_Yw(ctx);
    std::set<FqMatrix> pts, image;
    for (const auto& p : en.points) pts.insert(p.rep);
    for (const auto& p : en.points) image.insert(p.rep.frobenius(ctx.level() - 1));
    CHECK(image == pts);
  }
}

TEST_CASE("point export") {
  Setup s(2, 2, lt_mu(2));
  DLContext ctx(s.sd, s.ld, 2);
  const auto en = enumerate_Yw(ctx);
  const auto text = export_points(en.points);
  CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == en.points.size());
}

TEST_CASE("refusals") {
  const auto pair = cyclic_restriction(gl_datum(2), 2);
  const auto sd = make_shimura_datum(pair, 2, {-1, 0, 0, 0});
  const auto ld = compute_lambda(sd);
  CHECK_THROWS_AS(DLContext(sd, ld, 1), UnsupportedCase);
  Setup s(3, 2, lt_mu(3));
  CHECK_THROWS_AS(enumerate_Yw(DLContext(s.sd, s.ld, 3), 1000), SizeError);
}
