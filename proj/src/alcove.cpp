#include "depthzero/alcove.hpp"

#include <algorithm>

#include "depthzero/errors.hpp"

namespace depthzero {

namespace {

RatMatrix roots_matrix(const BasedRootDatum& datum, const std::vector<std::size_t>& which) {
  RatMatrix a(which.size(), datum.rank());
  for (std::size_t i = 0; i < which.size(); ++i)
    for (std::size_t j = 0; j < datum.rank(); ++j) a(i, j) = static_cast<long>(datum.roots()[which[i]][j]);
  return a;
}

std::vector<std::size_t> all_roots(const BasedRootDatum& datum) {
  std::vector<std::size_t> v(datum.num_roots());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

// Basis of {x : <alpha, x> = 0 for alpha in which}, as columns.
RatMatrix kernel_basis(const BasedRootDatum& datum, const std::vector<std::size_t>& which) {
  std::vector<RatVector> basis;
  if (which.empty()) {
    for (std::size_t j = 0; j < datum.rank(); ++j) {
      RatVector e(datum.rank(), Rational(0));
      e[j] = 1;
      basis.push_back(e);
    }
  } else {
    basis = nullspace(roots_matrix(datum, which));
  }
  RatMatrix b(datum.rank(), basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (std::size_t j = 0; j < datum.rank(); ++j) b(j, k) = basis[k][j];
  return b;
}

RatVector sub(const RatVector& a, const RatVector& b) {
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

}  // namespace

bool base_alcove_contains(const BasedRootDatum& datum, const RatVector& x, bool closed) {
  if (x.size() != datum.rank()) throw DimensionError("point length differs from rank");
  for (std::size_t i = 0; i < datum.num_roots(); ++i) {
    if (!datum.is_positive(i)) continue;
    const Rational v = pairing(datum.roots()[i], x);
    if (closed ? (v < -1 || v > 0) : (v <= -1 || v >= 0)) return false;
  }
  return true;
}

bool equal_mod_center(const BasedRootDatum& datum, const RatVector& x, const RatVector& y) {
  return datum.is_central(sub(x, y));
}

RatVector alcove_interior_point(const BasedRootDatum& datum) {
  if (datum.num_roots() == 0) return RatVector(datum.rank(), Rational(0));
  const auto& simple = datum.simple_roots();
  auto x = solve(roots_matrix(datum, simple), RatVector(simple.size(), Rational(-1)));
  if (!x) throw InvariantViolation("simple_roots", "simple roots are not independent");
  // each positive root now pairs to minus its height
  std::int64_t max_height = 0;
  for (std::size_t i = 0; i < datum.num_roots(); ++i)
    if (datum.is_positive(i)) max_height = std::max(max_height, datum.height(i));
  const Rational scale(1, max_height + 1);
  for (auto& c : *x) c *= scale;
  return *x;
}

WeylElement length_zero_w(const BasedRootDatum& datum, const IntVector& mu) {
  if (mu.size() != datum.rank()) throw DimensionError("cocharacter length differs from rank");
  const RatVector x = alcove_interior_point(datum);
  const RatVector mu_q = to_rational(mu);
  std::vector<WeylElement> found;
  for (auto& w : weyl_group(datum)) {
    RatVector y = sub(w.matrix * x, mu_q);
    if (base_alcove_contains(datum, y)) found.push_back(std::move(w));
  }
  if (found.size() != 1)
    throw InvariantViolation("length_zero_element",
                             std::to_string(found.size()) + " Weyl elements carry the base alcove to its mu-translate");
  return found.front();
}

std::vector<RatVector> b_sigma_orbit(const BasedRootDatum& datum, const IntVector& mu, const IntMatrix& w,
                                     std::size_t k_max) {
  const IntMatrix ws = w * datum.sigma();
  const RatVector mu_q = to_rational(mu);
  std::vector<RatVector> out{RatVector(datum.rank(), Rational(0))};
  for (std::size_t k = 0; k < k_max; ++k) out.push_back(sub(ws * out.back(), mu_q));
  return out;
}

FacetRecord facet_of_lambda(const BasedRootDatum& datum, const RatVector& lambda, const IntVector& mu,
                            const IntMatrix& w) {
  if (!is_dominant(datum, lambda))
    throw InvariantViolation("lambda_dominant", "lambda = " + to_string(lambda) + " is not dominant");
  FacetRecord rec;
  Rational max_pair = 0;
  for (std::size_t i = 0; i < datum.num_roots(); ++i) {
    const Rational v = pairing(datum.roots()[i], lambda);
    if (v == 0) rec.zero_roots.push_back(i);
    if (datum.is_positive(i) && v > max_pair) max_pair = v;
  }
  rec.sample_interior_point = RatVector(datum.rank(), Rational(0));
  if (max_pair != 0)
    for (std::size_t j = 0; j < datum.rank(); ++j) rec.sample_interior_point[j] = -lambda[j] / (2 * max_pair);

  // orbit of the origin under b sigma; its order divides that of w sigma
  const IntMatrix ws = w * datum.sigma();
  auto ord = matrix_order(ws, 1000000);
  if (!ord) throw InvariantViolation("finite_order", "w sigma has no finite order");
  const auto orbit = b_sigma_orbit(datum, mu, w, *ord);
  rec.orbit_in_facet_span = true;
  for (const auto& x : orbit)
    for (auto r : rec.zero_roots)
      if (pairing(datum.roots()[r], x) != 0) rec.orbit_in_facet_span = false;

  RatMatrix span(orbit.size() + datum.center_cochars().size(), datum.rank());
  std::size_t row = 0;
  for (const auto& x : orbit) {
    for (std::size_t j = 0; j < datum.rank(); ++j) span(row, j) = x[j];
    ++row;
  }
  for (const auto& z : datum.center_cochars()) {
    for (std::size_t j = 0; j < datum.rank(); ++j) span(row, j) = static_cast<long>(z[j]);
    ++row;
  }
  rec.orbit_spans_facet = rank(span) == kernel_basis(datum, rec.zero_roots).cols();
  return rec;
}

MinimalityReport facet_minimality(const BasedRootDatum& datum, const IntMatrix& w, const RatVector& lambda) {
  std::vector<std::size_t> phi_m;
  for (std::size_t i = 0; i < datum.num_roots(); ++i)
    if (pairing(datum.roots()[i], lambda) == 0) phi_m.push_back(i);
  const RatMatrix bv = kernel_basis(datum, phi_m);
  const std::size_t dim_center = datum.center_cochars().size();
  MinimalityReport rep{true, 0, {}};
  if (datum.num_roots() == 0) return rep;

  // {v in V : (w sigma - 1) v is central} has dimension dim Z + dim of the
  // fixed part of V/Z, since w sigma has finite order.
  const IntMatrix ws = w * datum.sigma();
  const IntMatrix shift = ws - IntMatrix::identity(datum.rank());
  const RatMatrix m = roots_matrix(datum, all_roots(datum)) * RatMatrix::from_int(shift) * bv;
  const auto ker = nullspace(m);
  rep.fixed_quotient_dim = ker.size() - dim_center;
  rep.minimal = rep.fixed_quotient_dim == 0;
  if (!rep.minimal) {
    auto ord = matrix_order(ws, 1000000);
    for (const auto& c : ker) {
      RatVector v = bv * c;
      if (datum.is_central(v)) continue;
      RatVector avg(datum.rank(), Rational(0));
      RatVector cur = v;
      for (std::uint64_t k = 0; k < *ord; ++k) {
        for (std::size_t j = 0; j < avg.size(); ++j) avg[j] += cur[j];
        cur = ws * cur;
      }
      rep.witness = avg;
      break;
    }
  }
  return rep;
}

bool facet_is_minimal(const BasedRootDatum& datum, const IntMatrix& w, const RatVector& lambda) {
  return facet_minimality(datum, w, lambda).minimal;
}

}  // namespace depthzero
