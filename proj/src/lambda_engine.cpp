#include "depthzero/lambda_engine.hpp"

#include <algorithm>
#include <map>

#include "depthzero/alcove.hpp"
#include "depthzero/errors.hpp"

namespace depthzero {

Integer ipow(const Integer& base, std::uint64_t exp) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

PrimePower factor_prime_power(std::uint64_t q) {
  if (q < 2) throw DomainError("q must be a prime power >= 2");
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  if (p == 0) p = q;
  unsigned f = 0;
  std::uint64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++f;
  }
  if (r != 1) throw DomainError(std::to_string(q) + " is not a prime power");
  return {q, p, f};
}

ShimuraDatum make_shimura_datum(BasedRootDatum datum, std::uint64_t q, IntVector mu) {
  if (mu.size() != datum.rank()) throw DimensionError("cocharacter length differs from rank");
  const auto cls = classify_cocharacter(datum, mu);
  if (!cls.dominant || !cls.minuscule)
    throw InvariantViolation("dominant_minuscule", "mu = " + to_string(mu) + " is not dominant minuscule");
  const PrimePower pq = factor_prime_power(q);
  WeylElement w = length_zero_w(datum, mu);
  return ShimuraDatum{std::move(datum), pq, std::move(mu), std::move(w)};
}

namespace {

RatVector scale(const RatVector& v, const Rational& c) {
  RatVector r(v);
  for (auto& x : r) x *= c;
  return r;
}

std::vector<std::size_t> image(const std::vector<std::size_t>& set, const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> out;
  for (auto i : set) out.push_back(perm[i]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> intersect(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::uint64_t order_bound(const ShimuraDatum& sd) {
  return static_cast<std::uint64_t>(weyl_group(sd.datum).size()) * sd.datum.sigma_order();
}

}  // namespace

LambdaData compute_lambda(const ShimuraDatum& sd) {
  const auto& datum = sd.datum;
  LambdaData ld;
  ld.wsigma = sd.w.matrix * datum.sigma();
  auto ord = matrix_order(ld.wsigma, order_bound(sd));
  if (!ord) throw InvariantViolation("finite_order", "w sigma has no finite order");
  ld.N = *ord;

  const Integer q = static_cast<unsigned long>(sd.q.q);
  const Integer denom = ipow(q, ld.N) - 1;
  RatVector sum(datum.rank(), Rational(0));
  RatVector term = to_rational(sd.mu);
  for (std::uint64_t k = 0; k < ld.N; ++k) {
    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += term[j];
    term = scale(ld.wsigma * term, Rational(q));
  }
  ld.lambda = scale(sum, Rational(-1) / Rational(denom));

  const RatVector qwl = scale(ld.wsigma * ld.lambda, Rational(q));
  for (std::size_t j = 0; j < datum.rank(); ++j)
    if (ld.lambda[j] - qwl[j] != static_cast<long>(sd.mu[j]))
      throw InvariantViolation("lambda_equation", "lambda - q w sigma lambda != mu");
  if (!is_dominant(datum, ld.lambda))
    throw InvariantViolation("lambda_dominant", "lambda = " + to_string(ld.lambda) + " is not dominant");

  ld.e = common_denominator(ld.lambda);
  for (const auto& x : ld.lambda) {
    Integer v = x.get_num() * (ld.e / x.get_den());
    ld.e_lambda.push_back(v.get_si());
  }
  if (denom % ld.e != 0) throw InvariantViolation("e_divides", "e does not divide q^N - 1");

  for (std::size_t i = 0; i < datum.num_roots(); ++i) {
    const auto& a = datum.roots()[i];
    ld.r_alpha.push_back(pairing(a, qwl));
    const auto mp = pairing(a, sd.mu);
    if (mp < 0) ld.phi_mu_neg.push_back(i);
    if (mp > 0) ld.phi_mu_pos.push_back(i);
    const Rational lp = pairing(a, ld.lambda);
    if (lp == 0) ld.phi_M.push_back(i);
    if (lp > 0) ld.phi_N.push_back(i);
    if (lp < 0) ld.phi_Nbar.push_back(i);
  }
  ld.dim_r = ld.phi_mu_neg.size();
  return ld;
}

std::vector<CheckResult> lambda_checks(const ShimuraDatum& sd, const LambdaData& ld) {
  const auto& datum = sd.datum;
  std::vector<CheckResult> out;
  const Integer q = static_cast<unsigned long>(sd.q.q);

  const RatVector qwl = scale(ld.wsigma * ld.lambda, Rational(q));
  bool eq = true;
  for (std::size_t j = 0; j < datum.rank(); ++j)
    if (ld.lambda[j] - qwl[j] != static_cast<long>(sd.mu[j])) eq = false;
  out.push_back({"lambda_equation", eq, "lambda - q w sigma lambda = mu"});
  out.push_back({"lambda_dominant", is_dominant(datum, ld.lambda), "lambda is dominant"});

  const Integer denom = ipow(q, ld.N) - 1;
  out.push_back({"e_divides_q_power", denom % ld.e == 0, "e | q^N - 1"});
  Integer g;
  const Integer p = static_cast<unsigned long>(sd.q.p);
  mpz_gcd(g.get_mpz_t(), ld.e.get_mpz_t(), p.get_mpz_t());
  out.push_back({"e_prime_to_p", g == 1, "gcd(e, p) = 1"});

  bool e_int = true;
  RatVector el = scale(ld.lambda, Rational(ld.e));
  for (const auto& x : el)
    if (x.get_den() != 1) e_int = false;
  // minimality of e: no proper divisor clears all denominators
  out.push_back({"e_minimal", e_int && common_denominator(ld.lambda) == ld.e, "e lambda integral, e least"});

  bool radii = true;
  for (auto i : ld.phi_mu_neg) {
    const Rational er = ld.r_alpha[i] * Rational(ld.e);
    if (er.get_den() != 1 || er <= 0) radii = false;
  }
  out.push_back({"radius_integrality", radii, "e r_alpha is a positive integer on Phi_{mu<0}"});

  auto perm = datum.root_permutation(ld.wsigma);
  if (!perm) {
    out.push_back({"wsigma_permutes_roots", false, "w sigma does not permute roots"});
    return out;
  }
  out.push_back({"levi_stable", image(ld.phi_M, *perm) == ld.phi_M, "w sigma Phi(M) = Phi(M)"});
  out.push_back({"unipotent_positive_part", intersect(ld.phi_N, image(ld.phi_Nbar, *perm)) == ld.phi_mu_pos,
                 "Phi(N) cap w sigma Phi(Nbar) = Phi_{mu>0}"});
  out.push_back({"unipotent_negative_part", intersect(ld.phi_Nbar, image(ld.phi_N, *perm)) == ld.phi_mu_neg,
                 "Phi(Nbar) cap w sigma Phi(N) = Phi_{mu<0}"});
  const auto tr = two_rho(datum);
  out.push_back({"dimension_formula",
                 static_cast<std::int64_t>(ld.dim_r) == pairing(tr, sd.mu),
                 "|Phi_{mu<0}| = <2 rho, mu>"});
  bool mu_in_levi_center = true;
  for (auto i : ld.phi_M)
    if (pairing(datum.roots()[i], sd.mu) != 0) mu_in_levi_center = false;
  out.push_back({"mu_central_in_levi", mu_in_levi_center, "mu pairs to zero with Phi(M)"});
  out.push_back({"lambda_sign_pattern", lambdapst_check(sd, ld).pass,
                 "sign of <alpha, lambda> from the first nonzero <alpha, (w sigma)^{-i} mu>"});
  return out;
}

LambdaSignReport lambdapst_check(const ShimuraDatum& sd, const LambdaData& ld) {
  const auto& datum = sd.datum;
  const IntMatrix inv = unimodular_inverse(ld.wsigma);
  std::vector<IntVector> shifted;  // (w sigma)^{-i} mu for i = 1..N
  IntVector cur = sd.mu;
  for (std::uint64_t i = 1; i <= ld.N; ++i) {
    cur = inv * cur;
    shifted.push_back(cur);
  }
  LambdaSignReport rep{{}, true};
  for (std::size_t r = 0; r < datum.num_roots(); ++r) {
    RootSignVerdict v{r, pairing(datum.roots()[r], ld.lambda), std::nullopt, 0, false};
    for (std::size_t i = 0; i < shifted.size(); ++i) {
      const auto val = pairing(datum.roots()[r], shifted[i]);
      if (val != 0) {
        v.first_nonzero_step = i + 1;
        v.first_nonzero_value = val;
        break;
      }
    }
    if (!v.first_nonzero_step)
      v.consistent = v.lambda_pairing == 0;
    else
      v.consistent = (v.lambda_pairing > 0) == (v.first_nonzero_value < 0) && v.lambda_pairing != 0;
    if (!v.consistent) rep.pass = false;
    rep.roots.push_back(v);
  }
  return rep;
}

std::vector<Integer> component_group(const BasedRootDatum& datum, const IntMatrix& v_sigma) {
  if (v_sigma.rows() != datum.rank() || v_sigma.cols() != datum.rank())
    throw DimensionError("v sigma must be rank x rank");
  return smith_invariant_factors(IntMatrix::identity(datum.rank()) - v_sigma);
}

WeilInteger weil_d(const ShimuraDatum& sd) {
  if (!sd.datum.sigma().is_identity())
    throw UnsupportedCase("the Weil integer is only computed when sigma is trivial");
  const IntMatrix& w = sd.w.matrix;
  IntMatrix wi = IntMatrix::identity(sd.datum.rank());
  IntVector sum(sd.datum.rank(), 0);
  const std::uint64_t bound = weyl_group(sd.datum).size();
  for (std::uint64_t i = 1; i <= bound; ++i) {
    const IntVector term = wi * sd.mu;
    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] = checked_add(sum[j], term[j]);
    wi = w * wi;
    if (wi.is_identity() && sd.datum.is_central(to_rational(sum))) return {i, sum};
  }
  throw InvariantViolation("weil_integer", "no i <= |W| with w^i = 1 and mu_i central");
}

Integer gl_order(std::size_t k, const Integer& Q) {
  Integer r = 1;
  const Integer top = ipow(Q, k);
  for (std::size_t i = 0; i < k; ++i) r *= top - ipow(Q, i);
  return r;
}

std::optional<Integer> m_wsigma_order(const ShimuraDatum& sd, const LambdaData& ld) {
  const auto& datum = sd.datum;
  const Integer q = static_cast<unsigned long>(sd.q.q);
  if (auto n = datum.gl_size(); n && datum.sigma().is_identity()) {
    // blocks: maximal runs of equal lambda coordinates
    std::vector<std::size_t> block(*n);
    std::map<Rational, std::size_t> ids;
    for (std::size_t i = 0; i < *n; ++i) block[i] = ids.emplace(ld.lambda[i], ids.size()).first->second;
    std::vector<std::size_t> size(ids.size(), 0);
    for (auto b : block) ++size[b];
    std::vector<std::size_t> next(ids.size());
    for (std::size_t j = 0; j < *n; ++j)
      for (std::size_t i = 0; i < *n; ++i)
        if (ld.wsigma(i, j) != 0) next[block[j]] = block[i];
    std::vector<bool> seen(ids.size(), false);
    Integer order = 1;
    for (std::size_t b = 0; b < ids.size(); ++b) {
      if (seen[b]) continue;
      std::uint64_t len = 0;
      for (std::size_t c = b; !seen[c]; c = next[c]) {
        seen[c] = true;
        ++len;
      }
      order *= gl_order(size[b], ipow(q, len));
    }
    return order;
  }
  if (ld.phi_M.empty()) {
    const std::size_t r = datum.rank();
    RatMatrix m(r, r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        m(i, j) = Rational(q) * static_cast<long>(ld.wsigma(i, j)) - (i == j ? 1 : 0);
    Rational det = 1;
    RatMatrix a = m;
    for (std::size_t c = 0; c < r; ++c) {
      std::size_t p = c;
      while (p < r && a(p, c) == 0) ++p;
      if (p == r) return Integer(0);
      if (p != c) {
        for (std::size_t j = 0; j < r; ++j) std::swap(a(p, j), a(c, j));
        det = -det;
      }
      det *= a(c, c);
      for (std::size_t i = c + 1; i < r; ++i) {
        const Rational f = a(i, c) / a(c, c);
        for (std::size_t j = c; j < r; ++j) a(i, j) -= f * a(c, j);
      }
    }
    return Integer(abs(det.get_num()));
  }
  return std::nullopt;
}

}  // namespace depthzero
