#include "depthzero/cartan.hpp"

#include "depthzero/errors.hpp"

namespace depthzero {

PMatrix CartanDecomposition::t() const {
  std::vector<Puiseux> d;
  const Rational trunc = g1.min_trunc();
  for (const auto& a : exponents) d.push_back(Puiseux::monomial(g1.field(), g1.field()->one(), a, trunc + a));
  return PMatrix::diagonal(d);
}

CartanDecomposition cartan_decompose(const PMatrix& g) {
  const std::size_t n = g.rows();
  if (g.cols() != n || n == 0) throw DimensionError("Cartan decomposition needs a square matrix");
  const auto& field = g.field();
  const Rational trunc = g.min_trunc();
  // invariant: g = P A Q
  PMatrix a = g;
  PMatrix p = PMatrix::identity(field, n, trunc), q = PMatrix::identity(field, n, trunc);
  RatVector exps;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = n, pc = n;
    Rational best;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (auto v = a(i, j).val(); v && (pr == n || *v < best)) {
          best = *v;
          pr = i;
          pc = j;
        }
    if (pr == n) throw PrecisionError("Cartan decomposition: no certifiable pivot");
    if (pr != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(pr, j));
        std::swap(p(j, k), p(j, pr));
      }
    if (pc != k)
      for (std::size_t i = 0; i < n; ++i) {
        std::swap(a(i, k), a(i, pc));
        std::swap(q(k, i), q(pc, i));
      }
    const Puiseux pivot_inv = inv(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k).is_zero()) continue;
      // row_i -= c row_k, so P gains col_k += c col_i
      const Puiseux c = a(i, k) * pivot_inv;
      for (std::size_t j = 0; j < n; ++j) a(i, j) = a(i, j) - c * a(k, j);
      for (std::size_t r = 0; r < n; ++r) p(r, k) = p(r, k) + p(r, i) * c;
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (a(k, j).is_zero()) continue;
      // col_j -= c col_k, so Q gains row_k += c row_j
      const Puiseux c = pivot_inv * a(k, j);
      for (std::size_t i = 0; i < n; ++i) a(i, j) = a(i, j) - a(i, k) * c;
      for (std::size_t r = 0; r < n; ++r) q(k, r) = q(k, r) + c * q(j, r);
    }
    exps.push_back(best);
  }
  // a is diagonal up to precision; a_kk = u^{a_k} eps_k with eps_k a unit
  for (std::size_t k = 0; k < n; ++k) {
    const Puiseux unit = a(k, k).shifted(-exps[k]);
    for (std::size_t r = 0; r < n; ++r) q(k, r) = unit * q(k, r);
  }
  return {p, exps, q};
}

Specialization specialize_point(const PMatrix& g, const FanData& fan) {
  const auto cd = cartan_decompose(g);
  const auto cone = locate(fan, cd.exponents);
  return {cone.label, cone, cd.g1.residue(), cd.exponents, cd.g2.residue()};
}

}  // namespace depthzero
