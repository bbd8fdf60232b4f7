#include "depthzero/toroidal_fan.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "depthzero/errors.hpp"

namespace depthzero {

namespace {

IntVector permute(const IntVector& v, const std::vector<std::size_t>& perm) {
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[perm[i]] = v[i];
  return out;
}

Rational pair(const IntVector& c, const RatVector& v) {
  Rational s = 0;
  for (std::size_t i = 0; i < c.size(); ++i) s += Rational(static_cast<long>(c[i])) * v[i];
  return s;
}

std::int64_t pair(const IntVector& c, const IntVector& v) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < c.size(); ++i) s = checked_add(s, checked_mul(c[i], v[i]));
  return s;
}

// Coefficients of v in the (linearly independent) generators.
std::optional<RatVector> coordinates(const std::vector<IntVector>& gens, const RatVector& v) {
  const std::size_t n = v.size();
  RatMatrix m(n, gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = Rational(static_cast<long>(gens[j][i]));
  return solve(m, v);
}

// Primitive rays of the nonnegative-pairing cone of `rows` that lie on
// `dim - 1` independent hyperplanes among them; `rows` pair against vectors.
std::set<IntVector> extreme_rays(const std::vector<IntVector>& rows, std::size_t dim) {
  std::set<IntVector> out;
  const std::size_t k = dim - 1;
  if (rows.size() < k) return out;
  std::vector<bool> mask(rows.size(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    RatMatrix m(std::max<std::size_t>(k, 1), dim);
    std::size_t r = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (mask[i]) {
        for (std::size_t j = 0; j < dim; ++j) m(r, j) = Rational(static_cast<long>(rows[i][j]));
        ++r;
      }
    const auto kernel = nullspace(m);
    if (kernel.size() != 1) continue;
    for (int sign : {1, -1}) {
      RatVector v = kernel[0];
      for (auto& x : v) x *= sign;
      bool ok = true;
      for (const auto& row : rows)
        if (pair(row, v) < 0) ok = false;
      if (ok) out.insert(primitive_integer_vector(v));
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

std::vector<std::size_t> identity_perm(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

ConeRecord translate(const ConeRecord& c, const std::vector<std::size_t>& perm) {
  ConeRecord out;
  for (const auto& g : c.generators) out.generators.push_back(permute(g, perm));
  for (const auto& h : c.inequalities) out.inequalities.push_back(permute(h, perm));
  std::sort(out.generators.begin(), out.generators.end());
  std::sort(out.inequalities.begin(), out.inequalities.end());
  out.label = c.label;
  out.perm.resize(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out.perm[i] = perm[c.perm[i]];
  return out;
}

}  // namespace

ConeRecord sigma_cone(std::size_t n, std::size_t ell) {
  if (n == 0 || ell > n) throw DomainError("sigma_ell needs n >= 1 and 0 <= ell <= n");
  ConeRecord c;
  for (std::size_t i = 1; i <= n; ++i) {
    IntVector g(n, 0);
    if (i <= ell) {
      for (std::size_t j = 0; j < i; ++j) g[j] = -1;
    } else {
      for (std::size_t j = i - 1; j < n; ++j) g[j] = 1;
    }
    c.generators.push_back(g);
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (i == ell) continue;
    IntVector h(n, 0);
    h[i] = 1;
    h[i - 1] = -1;
    c.inequalities.push_back(h);
  }
  if (ell >= 1) {
    IntVector h(n, 0);
    h[ell - 1] = -1;
    c.inequalities.push_back(h);
  }
  if (ell < n) {
    IntVector h(n, 0);
    h[ell] = 1;
    c.inequalities.push_back(h);
  }
  std::sort(c.generators.begin(), c.generators.end());
  std::sort(c.inequalities.begin(), c.inequalities.end());
  c.label = "sigma_" + std::to_string(ell);
  c.perm = identity_perm(n);
  return c;
}

FanData kgl_fan(std::size_t n, bool weyl_closure) {
  if (n == 0) throw DomainError("KGL_n needs n >= 1");
  FanData fan;
  fan.n = n;
  fan.weyl_closure = weyl_closure;
  auto perm = identity_perm(n);
  do {
    for (std::size_t ell = 0; ell <= n; ++ell) fan.cones.push_back(translate(sigma_cone(n, ell), perm));
  } while (weyl_closure && std::next_permutation(perm.begin(), perm.end()));
  return fan;
}

bool cone_contains(const ConeRecord& cone, const RatVector& v) {
  for (const auto& h : cone.inequalities)
    if (pair(h, v) < 0) return false;
  return true;
}

std::string kgl_orbit_label(const RatVector& v) {
  RatVector b = v;
  std::sort(b.begin(), b.end());
  const std::size_t n = b.size();
  std::size_t ell = 0;
  while (ell < n && b[ell] < 0) ++ell;
  std::vector<std::string> rays;
  for (std::size_t i = 1; i <= ell; ++i)
    if (i == ell || b[i] > b[i - 1]) rays.push_back("n" + std::to_string(i));
  for (std::size_t i = ell + 1; i <= n; ++i)
    if (i == ell + 1 ? b[i - 1] > 0 : b[i - 1] > b[i - 2]) rays.push_back("p" + std::to_string(i));
  if (rays.empty()) return "0";
  if (rays.size() == n) return "sigma_" + std::to_string(ell);
  std::string s = "{";
  for (std::size_t i = 0; i < rays.size(); ++i) s += (i ? "," : "") + rays[i];
  return s + "}";
}

ConeRecord locate(const FanData& fan, const RatVector& v) {
  if (v.size() != fan.n) throw DimensionError("vector rank does not match the fan");
  for (const auto& cone : fan.cones) {
    if (!cone_contains(cone, v)) continue;
    const auto coeff = coordinates(cone.generators, v);
    if (!coeff) throw InvariantViolation("simplicial_cone", "generators do not span the cone");
    ConeRecord face;
    for (std::size_t j = 0; j < cone.generators.size(); ++j)
      if ((*coeff)[j] > 0) face.generators.push_back(cone.generators[j]);
    face.inequalities = cone.inequalities;
    for (const auto& h : cone.inequalities)
      if (pair(h, v) == 0) {
        IntVector neg = h;
        for (auto& x : neg) x = -x;
        face.inequalities.push_back(neg);
      }
    std::sort(face.inequalities.begin(), face.inequalities.end());
    face.label = kgl_orbit_label(v);
    face.perm = cone.perm;
    return face;
  }
  throw DomainError("vector not covered by the fan");
}

bool double_description_consistent(const ConeRecord& cone) {
  if (cone.generators.empty()) return false;
  const std::size_t dim = cone.generators.front().size();
  for (const auto& g : cone.generators)
    for (const auto& h : cone.inequalities)
      if (pair(h, g) < 0) return false;
  std::set<IntVector> gens, ineqs;
  for (const auto& g : cone.generators) gens.insert(primitive_integer_vector(to_rational(g)));
  for (const auto& h : cone.inequalities) ineqs.insert(primitive_integer_vector(to_rational(h)));
  if (dim == 1) {
    // a ray in rank one is its own facet normal
    return gens == ineqs && gens.size() == 1;
  }
  return extreme_rays(cone.inequalities, dim) == gens && extreme_rays(cone.generators, dim) == ineqs;
}

bool weyl_stable(const FanData& fan) {
  std::set<std::vector<IntVector>> cones;
  for (const auto& c : fan.cones) cones.insert(c.generators);
  auto perm = identity_perm(fan.n);
  do {
    for (const auto& c : fan.cones) {
      std::vector<IntVector> g;
      for (const auto& x : c.generators) g.push_back(permute(x, perm));
      std::sort(g.begin(), g.end());
      if (!cones.count(g)) return false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return true;
}

bool faces_consistent(const FanData& fan) {
  for (const auto& c : fan.cones) {
    const std::size_t k = c.generators.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << k); ++mask) {
      RatVector p(fan.n, Rational(0));
      std::set<IntVector> face;
      for (std::size_t j = 0; j < k; ++j)
        if (mask >> j & 1) {
          face.insert(c.generators[j]);
          for (std::size_t i = 0; i < fan.n; ++i) p[i] += c.generators[j][i];
        }
      for (const auto& d : fan.cones) {
        if (!cone_contains(d, p)) continue;
        const auto coeff = coordinates(d.generators, p);
        if (!coeff) return false;
        std::set<IntVector> seen;
        for (std::size_t j = 0; j < d.generators.size(); ++j)
          if ((*coeff)[j] > 0) seen.insert(d.generators[j]);
        if (seen != face) return false;
      }
    }
  }
  return true;
}

std::string fan_to_text(const FanData& fan) {
  std::ostringstream os;
  os << "fan KGL_" << fan.n << " cones " << fan.cones.size() << " weyl_closure " << (fan.weyl_closure ? 1 : 0)
     << '\n';
  for (const auto& c : fan.cones) {
    os << "cone " << c.label << " perm";
    for (auto p : c.perm) os << ' ' << p;
    os << '\n';
    for (const auto& g : c.generators) os << "  generator " << to_string(g) << '\n';
    for (const auto& h : c.inequalities) os << "  inequality " << to_string(h) << '\n';
  }
  return os.str();
}

}  // namespace depthzero
