#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "depthzero/checks.hpp"
#include "depthzero/exact.hpp"
#include "depthzero/root_datum.hpp"

namespace depthzero {

struct PrimePower {
  std::uint64_t q;
  std::uint64_t p;
  unsigned f;
};

/// Throws DomainError unless q = p^f with p prime and f >= 1.
PrimePower factor_prime_power(std::uint64_t q);

struct ShimuraDatum {
  BasedRootDatum datum;
  PrimePower q;
  IntVector mu;
  WeylElement w;
};

/// Checks that mu is dominant minuscule and attaches the length-zero w.
ShimuraDatum make_shimura_datum(BasedRootDatum datum, std::uint64_t q, IntVector mu);

struct LambdaData {
  RatVector lambda;
  std::uint64_t N;          // order of w sigma on the cocharacter lattice
  Integer e;                // least e with e * lambda integral
  IntVector e_lambda;
  std::vector<Rational> r_alpha;  // <q w sigma lambda, alpha> for every root
  std::vector<std::size_t> phi_mu_neg, phi_mu_pos;
  std::vector<std::size_t> phi_M, phi_N, phi_Nbar;
  std::size_t dim_r;
  IntMatrix wsigma;
};

/// Closed-form geometric sum; throws InvariantViolation if an identity the
/// construction guarantees fails (lambda equation, dominance, e | q^N - 1).
LambdaData compute_lambda(const ShimuraDatum& sd);

/// Every structural identity of the lambda data, by name.
std::vector<CheckResult> lambda_checks(const ShimuraDatum& sd, const LambdaData& ld);

struct RootSignVerdict {
  std::size_t root;
  Rational lambda_pairing;
  std::optional<std::size_t> first_nonzero_step;  // least i > 0 with <alpha,(w sigma)^{-i} mu> != 0
  std::int64_t first_nonzero_value;
  bool consistent;
};

struct LambdaSignReport {
  std::vector<RootSignVerdict> roots;
  bool pass;
};

/// <alpha, lambda> > 0 iff the first nonzero <alpha, (w sigma)^{-i} mu> is
/// negative, and = 0 iff all of them vanish.
LambdaSignReport lambdapst_check(const ShimuraDatum& sd, const LambdaData& ld);

/// Invariant factors of 1 - v_sigma on the cocharacter lattice (0 = free).
std::vector<Integer> component_group(const BasedRootDatum& datum, const IntMatrix& v_sigma);

struct WeilInteger {
  std::uint64_t d;
  IntVector mu_d;
};

/// Least i with w^i = 1 and sum_{j<i} w^j mu central. Split case only:
/// nontrivial sigma raises UnsupportedCase.
WeilInteger weil_d(const ShimuraDatum& sd);

/// |M^{w sigma}(F_q)|: for GL_n by the block formula, for a torus Levi by
/// |det(q w sigma - 1)|; nullopt otherwise.
std::optional<Integer> m_wsigma_order(const ShimuraDatum& sd, const LambdaData& ld);

/// Order of GL_k(F_Q).
Integer gl_order(std::size_t k, const Integer& Q);

Integer ipow(const Integer& base, std::uint64_t exp);

}  // namespace depthzero
