#include <random>

#include "depthzero/cartan.hpp"
#include "depthzero/errors.hpp"
#include "depthzero/lt_specialize.hpp"
#include "doctest.h"

using namespace depthzero;

namespace {

Rational R(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

Puiseux mono(const FieldPtr& F, Fq c, const Rational& e, const Rational& T) { return Puiseux::monomial(F, c, e, T); }

FqMatrix random_prime_gl(const FieldPtr& F, std::size_t n, std::mt19937_64& rng) {
  while (true) {
    FqMatrix a(F, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = F->from_int(static_cast<std::int64_t>(rng() % F->p()));
    if (det(a).v != 0) return a;
  }
}

FqMatrix rowspace(const FieldPtr& F, const std::vector<std::vector<Fq>>& rows) {
  const auto e = rref(FqMatrix::from_rows(F, rows));
  FqMatrix out(F, e.pivots.size(), e.reduced.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = e.reduced(i, j);
  return out;
}

}  // namespace

TEST_CASE("two equal-valuation coordinates over F_4") {
  const auto F = FiniteField::make(2, 1, 2);
  const Fq w = F->generator();
  const Rational T = 4;
  LevelVector t{F, {mono(F, F->one(), R(1, 3), T), mono(F, w, R(1, 3), T)}};
  const auto nl = normalize_breaks(t);
  CHECK(nl.transform.is_identity());
  CHECK(is_normalized(t));
  const auto bd = breaks(t);
  CHECK(bd.breaks == std::vector<std::size_t>{0, 2});
  CHECK(bd.lengths == std::vector<std::size_t>{2});
  CHECK(bd.residues.at(0) == std::vector<Fq>{F->inv(w), F->one()});
  const auto flag = flag_from_breaks(bd);
  CHECK(flag.flag.at(0) == rowspace(F, {{F->one(), w}}));
  CHECK(flag.flag.at(1).is_identity());
  CHECK(wedge_oracle(t) == flag);

  // hand-computed wedge: z1 ^ z2 = t1 t2^2 - t2 t1^2 = (w^2 - w) u, and
  // varpi'_2 = t1^2 t2 = w u, so the reduction is w - 1
  const Puiseux wedge = t.t[0] * qpower(t.t[1]) - t.t[1] * qpower(t.t[0]);
  const Puiseux varpi = qpower(t.t[0]) * t.t[1];
  CHECK((wedge * inv(varpi)).residue() == F->sub(w, F->one()));
}

TEST_CASE("one elimination step") {
  const auto F = FiniteField::make(2, 1, 2);
  const Rational T = 4;
  LevelVector t{F, {mono(F, F->one(), R(1, 3), T), mono(F, F->one(), R(1, 3), T) + mono(F, F->one(), 1, T)}};
  CHECK(!is_normalized(t));
  const auto nl = normalize_breaks(t);
  CHECK(is_normalized(nl.vector));
  CHECK(*nl.vector.t[1].val() == 1);
  CHECK(*nl.vector.t[0].val() == R(1, 3));
  const auto back = transform_level_vector(t, nl.transform);
  for (std::size_t i = 0; i < 2; ++i) CHECK(back.t[i] == nl.vector.t[i]);
  CHECK(breaks(nl.vector).lengths == std::vector<std::size_t>{1, 1});

  LevelVector dead{F, {mono(F, F->one(), R(1, 3), T), mono(F, F->one(), R(1, 3), T)}};
  CHECK_THROWS_AS(normalize_breaks(dead), PrecisionError);
  CHECK_THROWS_AS(breaks(t), DomainError);
  LevelVector zero{F, {Puiseux::zero(F, T)}};
  CHECK_THROWS_AS(check_level_vector(zero), DomainError);
}

TEST_CASE("three coordinates with two blocks") {
  const auto F = FiniteField::make(2, 1, 2);
  const Fq w = F->generator();
  const Rational T = 4;
  LevelVector t{F,
                {mono(F, F->one(), R(1, 3), T), mono(F, w, R(1, 3), T) + mono(F, F->one(), R(2, 3), T),
                 mono(F, w, R(1, 2), T)}};
  const auto bd = breaks(t);
  CHECK(bd.breaks == std::vector<std::size_t>{0, 2, 3});
  CHECK(bd.lengths == std::vector<std::size_t>{2, 1});
  CHECK(bd.residues[1] == std::vector<Fq>{F->one()});
  const auto flag = flag_from_breaks(bd);
  const Fq z = F->zero(), o = F->one();
  CHECK(flag.flag[0] == rowspace(F, {{o, w, z}}));
  CHECK(flag.flag[1] == rowspace(F, {{o, z, z}, {z, o, z}}));
  CHECK(flag.flag[2].is_identity());
  CHECK(sigma_compatible(flag));
  CHECK(wedge_oracle(t) == flag);
}

TEST_CASE("strictly increasing valuations give coordinate flags") {
  const auto F = FiniteField::make(3, 1, 1);
  const Rational T = 6;
  LevelVector t{F, {mono(F, F->from_int(2), R(1, 2), T), mono(F, F->one(), 1, T), mono(F, F->one(), R(3, 2), T)}};
  const auto bd = breaks(t);
  CHECK(bd.lengths == std::vector<std::size_t>{1, 1, 1});
  const auto flag = wedge_oracle(t);
  CHECK(flag == flag_from_breaks(bd));
  for (std::size_t s = 1; s <= 3; ++s) {
    FqMatrix e(F, s, 3);
    for (std::size_t i = 0; i < s; ++i) e(i, i) = F->one();
    CHECK(flag.flag[s - 1] == e);
  }
  // n = 1
  LevelVector one{F, {mono(F, F->one(), 1, T)}};
  CHECK(wedge_oracle(one) == flag_from_breaks(breaks(one)));
  CHECK(wedge_oracle(one).flag.at(0).is_identity());
}

TEST_CASE("dependent residues are rejected by the flag construction") {
  const auto F = FiniteField::make(2, 1, 2);
  BreakData bd{F, {0, 2}, {2}, {{F->one(), F->one()}}};
  CHECK_THROWS_AS(flag_from_breaks(bd), InvariantViolation);
  const auto F3 = FiniteField::make(3, 2, 1);
  CHECK_THROWS_AS(flag_from_breaks(BreakData{F3, {0, 1}, {1}, {{F3->one()}}}), UnsupportedCase);
}

TEST_CASE("Plucker round trip") {
  std::mt19937_64 rng(3);
  const auto F = FiniteField::make(3, 1, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 3, i = 1 + rng() % n;
    std::vector<std::vector<Fq>> rows(i, std::vector<Fq>(n));
    for (auto& r : rows)
      for (auto& x : r) x = F->element(rng() % F->size());
    const auto space = rowspace(F, rows);
    if (space.rows() != i) continue;
    CHECK(subspace_from_plucker(F, n, i, plucker(FqMatrix::from_rows(F, rows))) == space);
  }
  // e1^e2 + e3^e4 is not decomposable; coordinates in lexicographic order
  std::vector<Fq> bad(6, F->zero());
  bad[0] = F->one();
  bad[5] = F->one();
  CHECK_THROWS_AS(subspace_from_plucker(F, 4, 2, bad), InvariantViolation);
  CHECK_THROWS_AS(subspace_from_plucker(F, 4, 2, std::vector<Fq>(6, F->zero())), InvariantViolation);
}

TEST_CASE("oracle equivalence on seeded random vectors") {
  for (auto [n, p] : {std::pair<std::size_t, std::uint64_t>{2, 2}, {3, 2}, {2, 3}}) {
    const auto F = FiniteField::make(p, 1, static_cast<unsigned>(n));
    std::mt19937_64 rng(100 + n * 10 + p);
    for (int trial = 0; trial < 60; ++trial) {
      const auto t = random_normalized_level_vector(F, n, rng);
      REQUIRE(is_normalized(t));
      const auto bd = breaks(t);
      const auto flag = flag_from_breaks(bd);
      CHECK(sigma_compatible(flag));
      CHECK(wedge_oracle(t) == flag);

      // normalization is idempotent, and scrambling by GL_n(F_p) keeps the
      // stratum label
      CHECK(normalize_breaks(t).transform.is_identity());
      const auto a = random_prime_gl(F, n, rng);
      const auto scrambled = transform_level_vector(t, a);
      NormalizedLevel nl;
      try {
        nl = normalize_breaks(scrambled);
      } catch (const PrecisionError&) {
        continue;
      }
      CHECK(is_normalized(nl.vector));
      CHECK(det(nl.transform).v != 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) CHECK(F->in_prime_field(nl.transform(i, j)));
      const auto back = transform_level_vector(scrambled, nl.transform);
      for (std::size_t i = 0; i < n; ++i) CHECK(back.t[i] == nl.vector.t[i]);
      CHECK(breaks(nl.vector).lengths == bd.lengths);
      CHECK(wedge_oracle(nl.vector) == flag_from_breaks(breaks(nl.vector)));
    }
  }
}

TEST_CASE("level equation") {
  const auto F = FiniteField::make(2, 1, 1);
  const Rational T = 5;
  const LevelVector z{F, {mono(F, F->one(), 1, T)}};
  const Puiseux p = mono(F, F->one(), 1, T);
  CHECK(verify_level_equation(z, {}, p));
  CHECK(!verify_level_equation(z, {}, p + mono(F, F->one(), 2, T)));
  CHECK_THROWS_AS(verify_level_equation(z, {}, Puiseux::zero(F, 1)), PrecisionError);
  CHECK_THROWS_AS(verify_level_equation(z, {p}, p), DimensionError);
}

TEST_CASE("level structures from Y(w) points land in the open stratum") {
  std::mt19937_64 rng(21);
  for (auto [n, m] : {std::pair<std::size_t, unsigned>{2, 2}, {2, 3}, {3, 3}}) {
    IntVector mu(n, 0);
    mu[0] = -1;
    const auto sd = make_shimura_datum(gl_datum(n), 2, mu);
    const auto ld = compute_lambda(sd);
    const DLContext ctx(sd, ld, m);
    const auto& F = ctx.field();
    // Lang preimages of u w over every u in U_{mu<0}(F_{q^m})
    std::vector<FqMatrix> seeds;
    const auto& slots = ctx.u_mu_neg_slots();
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < slots.size(); ++k) total *= F->size();
    for (std::uint64_t code = 0; code < total; ++code) {
      FqMatrix u = FqMatrix::identity(F, n);
      std::uint64_t c = code;
      for (const auto& [i, j] : slots) {
        u(i, j) = F->element(c % F->size());
        c /= F->size();
      }
      if (auto g = lang_preimage(F, u * ctx.w())) seeds.push_back(*g);
    }
    REQUIRE(!seeds.empty());
    const auto fan = kgl_fan(n);
    int done = 0;
    for (int trial = 0; trial < 12; ++trial) {
      FqMatrix g0(F, n, n);
      while (true) {
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) g0(i, j) = F->from_int(static_cast<std::int64_t>(rng() % 2));
        if (det(g0).v != 0) break;
      }
      const YwPoint pt = ctx.canonicalize(g0 * seeds[rng() % seeds.size()]);
      const Rational T = 4;
      std::vector<Puiseux> corr;
      for (std::size_t j = 1; j < n; ++j)
        corr.push_back(mono(F, F->element(rng() % F->size()), R(1 + static_cast<long>(rng() % 3), 2), T));
      const auto ls = lift_yw_point(ctx, pt, T, corr);
      CHECK(verify_level_equation(ls.z1, ls.u_flats, ls.p_flat));
      CHECK(ls.p_flat == mono(F, F->one(), 1, ls.p_flat.trunc()));
      CHECK(ls.h.residue() == inverse(pt.rep));

      // the open stratum, with residue the first row of the point's inverse
      REQUIRE(is_normalized(ls.z1));
      const auto bd = breaks(ls.z1);
      CHECK(bd.lengths == std::vector<std::size_t>{n});
      const auto hinv = inverse(pt.rep);
      const Fq last = F->inv(hinv(0, n - 1));
      for (std::size_t c = 0; c < n; ++c) CHECK(bd.residues[0][c] == F->mul(hinv(0, c), last));
      CHECK(wedge_oracle(ls.z1) == flag_from_breaks(bd));

      // the level element specializes to the limit point of e lambda
      const auto sp = specialize_point(ls.level, fan);
      CHECK(sp.orbit_label == "sigma_0");
      CHECK(sp.exponents == ld.lambda);
      ++done;
    }
    CHECK(done == 12);
  }
  // outside the Lubin-Tate datum
  const auto sd = make_shimura_datum(gl_datum(3), 2, {-1, -1, 0});
  const auto ld = compute_lambda(sd);
  const DLContext ctx(sd, ld, 2);
  const auto seed = lang_preimage(ctx.field(), ctx.w());
  if (seed) CHECK_THROWS_AS(lift_yw_point(ctx, ctx.canonicalize(*seed), 4), UnsupportedCase);
}
