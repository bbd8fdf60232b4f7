#include <algorithm>
#include <random>
#include <set>

#include "depthzero/cartan.hpp"
#include "depthzero/errors.hpp"
#include "depthzero/lambda_engine.hpp"
#include "depthzero/toroidal_fan.hpp"
#include "doctest.h"

using namespace depthzero;

namespace {

Rational R(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

RatVector rv(std::initializer_list<long> xs) {
  RatVector v;
  for (long x : xs) v.push_back(R(x));
  return v;
}

std::set<IntVector> as_set(const std::vector<IntVector>& v) { return {v.begin(), v.end()}; }

// Independent membership test straight from the chain of inequalities.
bool in_sigma_by_chain(const RatVector& a, std::size_t ell) {
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    if (i + 1 != ell && a[i] > a[i + 1]) return false;
  if (ell >= 1 && a[ell - 1] > 0) return false;
  if (ell < a.size() && a[ell] < 0) return false;
  return true;
}

Puiseux random_series(const FieldPtr& F, std::mt19937_64& rng, std::int64_t ram, std::int64_t lo, const Rational& T,
                      double density) {
  Puiseux x = Puiseux::zero(F, T, ram);
  for (std::int64_t k = lo; R(k, ram) < T; ++k)
    if (std::uniform_real_distribution<double>(0, 1)(rng) < density)
      x = x + Puiseux::monomial(F, F->element(rng() % F->size()), R(k, ram), T);
  return x;
}

PMatrix random_unimodular(const FieldPtr& F, std::size_t n, std::mt19937_64& rng, std::int64_t ram, const Rational& T) {
  while (true) {
    FqMatrix base(F, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) base(i, j) = F->element(rng() % F->size());
    if (!det(base).v) continue;
    PMatrix m = PMatrix::from_fq(base, T);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = m(i, j) + random_series(F, rng, ram, 1, T, 0.3);
    return m;
  }
}

}  // namespace

TEST_CASE("sigma cones for n = 1 and n = 2") {
  const auto f1 = kgl_fan(1);
  REQUIRE(f1.cones.size() == 2);
  std::set<IntVector> rays;
  for (const auto& c : f1.cones) rays.insert(c.generators.at(0));
  CHECK(rays == std::set<IntVector>{{1}, {-1}});

  CHECK(as_set(sigma_cone(2, 0).generators) == std::set<IntVector>{{1, 1}, {0, 1}});
  CHECK(as_set(sigma_cone(2, 1).generators) == std::set<IntVector>{{-1, 0}, {0, 1}});
  CHECK(as_set(sigma_cone(2, 2).generators) == std::set<IntVector>{{-1, 0}, {-1, -1}});
  CHECK(as_set(sigma_cone(2, 0).inequalities) == std::set<IntVector>{{1, 0}, {-1, 1}});
  CHECK(as_set(sigma_cone(2, 1).inequalities) == std::set<IntVector>{{-1, 0}, {0, 1}});
  CHECK(as_set(sigma_cone(2, 2).inequalities) == std::set<IntVector>{{-1, 1}, {0, -1}});
  CHECK(kgl_fan(2, false).cones.size() == 3);
  for (std::size_t n = 1; n <= 4; ++n) {
    std::size_t fact = 1;
    for (std::size_t k = 2; k <= n; ++k) fact *= k;
    CHECK(kgl_fan(n).cones.size() == fact * (n + 1));
  }
}

TEST_CASE("inequalities agree with the chain description") {
  std::mt19937_64 rng(8);
  for (std::size_t n = 1; n <= 4; ++n)
    for (int t = 0; t < 300; ++t) {
      RatVector v;
      for (std::size_t i = 0; i < n; ++i) v.push_back(R(static_cast<long>(rng() % 7) - 3));
      for (std::size_t ell = 0; ell <= n; ++ell) CHECK(cone_contains(sigma_cone(n, ell), v) == in_sigma_by_chain(v, ell));
    }
}

TEST_CASE("locate") {
  const auto fan = kgl_fan(2);
  CHECK(locate(fan, rv({0, 0})).label == "0");
  CHECK(locate(fan, rv({0, 0})).generators.empty());
  CHECK(locate(fan, rv({1, 2})).label == "sigma_0");
  CHECK(locate(fan, rv({-1, 2})).label == "sigma_1");
  CHECK(locate(fan, rv({2, -1})).label == "sigma_1");
  CHECK(locate(fan, rv({-1, 0})).label == "{n1}");
  CHECK(locate(fan, rv({3, 3})).label == "{p1}");
  const auto lt = make_shimura_datum(gl_datum(2), 2, {-1, 0});
  CHECK(locate(fan, to_rational(compute_lambda(lt).e_lambda)).label == "sigma_0");
  CHECK_THROWS_AS(locate(kgl_fan(3, false), rv({1, 0, -1})), DomainError);
}

TEST_CASE("completeness, stability and double description") {
  std::mt19937_64 rng(10);
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto fan = kgl_fan(n);
    CHECK(weyl_stable(fan));
    CHECK(!weyl_stable(kgl_fan(n, false)) == (n > 1));
    for (const auto& c : fan.cones) CHECK(double_description_consistent(c));
    if (n <= 3) CHECK(faces_consistent(fan));
    for (int t = 0; t < 1000; ++t) {
      RatVector v;
      for (std::size_t i = 0; i < n; ++i) v.push_back(R(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 3)));
      const auto face = locate(fan, v);
      CHECK(cone_contains(face, v));
      // every maximal cone through v contains the located face
      for (const auto& c : fan.cones) {
        if (!cone_contains(c, v)) continue;
        const auto gens = as_set(c.generators);
        for (const auto& g : face.generators) CHECK(gens.count(g) == 1);
      }
      // the label depends only on the S_n orbit
      RatVector w = v;
      std::shuffle(w.begin(), w.end(), rng);
      CHECK(locate(fan, w).label == face.label);
    }
  }
  ConeRecord broken = sigma_cone(3, 1);
  broken.generators.pop_back();
  CHECK(!double_description_consistent(broken));
}

TEST_CASE("fan export") {
  const auto text = fan_to_text(kgl_fan(2, false));
  CHECK(text.find("cone sigma_0") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 3 * 5);
}

TEST_CASE("Cartan decomposition examples") {
  const auto F = FiniteField::make(2, 1, 2);
  const Rational T = 6;
  const auto id = PMatrix::identity(F, 3, T);
  const auto cd = cartan_decompose(id);
  CHECK(cd.exponents == RatVector(3, Rational(0)));
  CHECK(cd.g1.residue().is_identity());
  CHECK(cd.g2.residue().is_identity());

  PMatrix g(2, 2, Puiseux::zero(F, T));
  g(0, 1) = Puiseux::monomial(F, F->one(), 1, T);
  g(1, 0) = Puiseux::constant(F, F->one(), T);
  const auto c2 = cartan_decompose(g);
  CHECK(c2.exponents == rv({0, 1}));
  CHECK(agree_to(c2.g1 * c2.t() * c2.g2, g, T - 1));
}

TEST_CASE("Cartan decomposition on seeded matrices") {
  std::mt19937_64 rng(12);
  std::size_t count = 0, skipped = 0;
  for (auto [p, m, n, ram] : {std::tuple<std::uint64_t, unsigned, std::size_t, std::int64_t>{2, 2, 2, 3}, {2, 2, 3, 3},
                              {3, 1, 2, 2}, {3, 1, 3, 1}, {2, 3, 4, 1}}) {
    const auto F = FiniteField::make(p, 1, m);
    for (int t = 0; t < 100; ++t, ++count) {
      const Rational T = 5;
      PMatrix g(n, n, Puiseux::zero(F, T));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = random_series(F, rng, ram, -ram, T, 0.4);
      CartanDecomposition cd;
      try {
        cd = cartan_decompose(g);
      } catch (const PrecisionError&) {
        ++skipped;
        continue;
      }
      const auto back = cd.g1 * cd.t() * cd.g2;
      const Rational prec = std::min(back.min_trunc(), g.min_trunc());
      CHECK(agree_to(back, g, prec));
      CHECK(det(cd.g1.residue()).v != 0);
      CHECK(det(cd.g2.residue()).v != 0);
      CHECK(std::is_sorted(cd.exponents.begin(), cd.exponents.end()));
      // exponents are invariant under unimodular translation on both sides
      const auto k1 = random_unimodular(F, n, rng, ram, T), k2 = random_unimodular(F, n, rng, ram, T);
      RatVector moved;
      try {
        moved = cartan_decompose(k1 * g * k2).exponents;
      } catch (const PrecisionError&) {
        ++skipped;
        continue;
      }
      CHECK(moved == cd.exponents);
    }
  }
  CHECK(count == 500);
  CHECK(skipped < 50);
}

TEST_CASE("specialization of a slope point") {
  // g = u^{lambda} h^{-1} lands in the orbit of the limit point of e lambda,
  // with residues in the stabilizer normal form
  std::mt19937_64 rng(14);
  for (std::size_t n : {2, 3}) {
    const auto sd = make_shimura_datum(gl_datum(n), 2, [&] {
      IntVector mu(n, 0);
      mu[0] = -1;
      return mu;
    }());
    const auto ld = compute_lambda(sd);
    const auto F = FiniteField::make(2, 1, n);
    const auto fan = kgl_fan(n);
    const Rational T = 6;
    for (int t = 0; t < 20; ++t) {
      const auto h = random_unimodular(F, n, rng, static_cast<std::int64_t>(ld.e.get_si()), T);
      std::vector<Puiseux> d;
      for (const auto& l : ld.lambda) d.push_back(Puiseux::monomial(F, F->one(), l, T + l));
      const PMatrix g = PMatrix::diagonal(d) * inverse(h);
      const auto sp = specialize_point(g, fan);
      CHECK(sp.exponents == ld.lambda);
      CHECK(sp.orbit_label == locate(fan, to_rational(ld.e_lambda)).label);
      CHECK(sp.orbit_label == "sigma_0");
      const FqMatrix g1inv = inverse(sp.g1_residue), g2h = sp.g2_residue * h.residue();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (i > j) CHECK(g1inv(i, j).v == 0);
          if (i < j) CHECK(g2h(i, j).v == 0);
        }
      for (std::size_t i = 0; i < n; ++i) CHECK(g2h(i, i) == g1inv(i, i));
    }
  }
  const auto F = FiniteField::make(3, 1, 1);
  std::mt19937_64 rng2(2);
  const auto h = random_unimodular(F, 3, rng2, 1, 5);
  const auto sp = specialize_point(h, kgl_fan(3));
  CHECK(sp.orbit_label == "0");
  CHECK(sp.g1_residue * sp.g2_residue == h.residue());
}
