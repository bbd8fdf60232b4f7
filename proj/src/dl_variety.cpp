#include "depthzero/dl_variety.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "depthzero/errors.hpp"

namespace depthzero {

namespace {

using Slot = DLContext::Slot;

Slot slot_of(const IntVector& alpha) {
  std::size_t i = alpha.size(), j = alpha.size();
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (alpha[k] == 1) i = k;
    if (alpha[k] == -1) j = k;
  }
  return {i, j};
}

std::vector<Slot> slots_of(const BasedRootDatum& datum, const std::vector<std::size_t>& idx) {
  std::vector<Slot> out;
  for (auto r : idx) out.push_back(slot_of(datum.roots()[r]));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Slot> intersect(const std::vector<Slot>& a, const std::vector<Slot>& b) {
  std::vector<Slot> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<Slot> difference(const std::vector<Slot>& a, const std::vector<Slot>& b) {
  std::vector<Slot> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::uint64_t small_e(const Integer& e) {
  if (!e.fits_ulong_p()) throw SizeError("e does not fit a machine word");
  return e.get_ui();
}

std::uint64_t exponent_mod(std::int64_t a, std::uint64_t e) {
  std::int64_t r = a % static_cast<std::int64_t>(e);
  if (r < 0) r += static_cast<std::int64_t>(e);
  return static_cast<std::uint64_t>(r);
}

// Solve for D supported on `unknowns` such that the entries of
// (left ? (I + D) y : y (I + D)) outside `allowed` agree with the identity.
std::optional<FqMatrix> pattern_solve(const FqMatrix& y, const std::vector<Slot>& unknowns,
                                      const std::vector<Slot>& allowed, bool left) {
  const auto& field = y.field();
  const auto& F = *field;
  const std::size_t n = y.rows();
  std::vector<Slot> eqs;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (!std::binary_search(allowed.begin(), allowed.end(), Slot{a, b})) eqs.emplace_back(a, b);
  FqMatrix sys(field, eqs.size(), unknowns.size());
  std::vector<Fq> rhs(eqs.size());
  for (std::size_t r = 0; r < eqs.size(); ++r) {
    const auto [a, b] = eqs[r];
    rhs[r] = F.sub(a == b ? F.one() : F.zero(), y(a, b));
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      const auto [k, l] = unknowns[u];
      // left: D_{kl} y_{lb} contributes to row k; right: y_{ak} D_{kl} to column l
      if (left && k == a) sys(r, u) = y(l, b);
      if (!left && l == b) sys(r, u) = y(a, k);
    }
  }
  auto sol = solve(sys, rhs);
  if (!sol) return std::nullopt;
  FqMatrix d = FqMatrix::identity(field, n);
  for (std::size_t u = 0; u < unknowns.size(); ++u) d(unknowns[u].first, unknowns[u].second) = (*sol)[u];
  return d;
}

}  // namespace

DLContext::DLContext(const ShimuraDatum& sd, const LambdaData& ld, unsigned m) : sd_(&sd), ld_(&ld), m_(m) {
  const auto& datum = sd.datum;
  if (!datum.gl_size()) throw UnsupportedCase("the variety is only realized for GL_n data");
  if (!datum.sigma().is_identity()) throw UnsupportedCase("the variety is only realized for split GL_n");
  if (m == 0) throw DomainError("field level must be positive");
  n_ = *datum.gl_size();
  field_ = FiniteField::make(sd.q.p, sd.q.f, m);
  w_ = FqMatrix::from_int(field_, sd.w.matrix);
  w_inv_ = FqMatrix::from_int(field_, sd.w.matrix.transpose());

  const auto perm = datum.root_permutation(ld.wsigma);
  if (!perm) throw InvariantViolation("root_permutation", "w sigma does not permute the roots");
  std::vector<std::size_t> w_n;
  for (auto r : ld.phi_N) w_n.push_back((*perm)[r]);
  u_mu_neg_ = slots_of(datum, ld.phi_mu_neg);
  n_slots_ = slots_of(datum, ld.phi_N);
  wn_ = slots_of(datum, w_n);
  const auto nbar = slots_of(datum, ld.phi_Nbar);
  phi0_ = intersect(n_slots_, wn_);
  kernel_ = intersect(nbar, wn_);
  n_not_wn_ = difference(n_slots_, wn_);

  block_.assign(n_, 0);
  for (std::size_t i = 1; i < n_; ++i) {
    if (ld.lambda[i] < ld.lambda[i - 1]) throw InvariantViolation("lambda_dominant", "lambda is not sorted");
    block_[i] = block_[i - 1] + (ld.lambda[i] == ld.lambda[i - 1] ? 0 : 1);
  }
}

bool DLContext::in_pattern(const FqMatrix& x, const std::vector<Slot>& slots) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      if (i == j) {
        if (x(i, j) != field_->one()) return false;
      } else if (x(i, j).v && !std::binary_search(slots.begin(), slots.end(), Slot{i, j})) {
        return false;
      }
    }
  return true;
}

bool DLContext::in_levi(const FqMatrix& x) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (block_[i] != block_[j] && x(i, j).v) return false;
  return true;
}

FqMatrix DLContext::ad_wsigma(const FqMatrix& x) const { return w_ * x.frobenius() * w_inv_; }

FqMatrix DLContext::lang_value(const FqMatrix& g) const { return inverse(g) * g.frobenius() * w_inv_; }

FqMatrix DLContext::pi_w(const FqMatrix& y) const {
  if (!in_pattern(y, wn_)) throw DomainError("pi_w: argument outside Ad(w sigma)(N)");
  auto d = pattern_solve(y, kernel_, phi0_, false);
  if (!d) throw InvariantViolation("pi_w_factorization", "no factorization through N cap Ad(w sigma)(N)");
  FqMatrix a = y * *d;
  if (!in_pattern(a, phi0_)) throw InvariantViolation("pi_w_factorization", "factor outside N cap Ad(w sigma)(N)");
  return a;
}

FqMatrix DLContext::phi_w(const FqMatrix& h) const {
  if (!in_pattern(h, phi0_)) throw DomainError("phi_w: argument outside N cap Ad(w sigma)(N)");
  return pi_w(ad_wsigma(h));
}

DLContext::ArtinSchreier DLContext::solve_artin_schreier(const FqMatrix& x) const {
  if (!in_pattern(x, phi0_)) throw DomainError("Artin-Schreier: argument outside N cap Ad(w sigma)(N)");
  FqMatrix h = x;
  const std::size_t bound = phi0_.size() + 2;
  for (std::size_t step = 1; step <= bound; ++step) {
    FqMatrix next = x * phi_w(h);
    if (next == h) {
      if (!(h * inverse(phi_w(h)) == x))
        throw InvariantViolation("artin_schreier", "fixed point does not solve the equation");
      return {h, step};
    }
    h = std::move(next);
  }
  throw InvariantViolation("phi_w_nilpotent", "Artin-Schreier iteration did not stabilize");
}

YwPoint DLContext::canonicalize(const FqMatrix& g) const {
  if (g.field() != field_) throw DomainError("canonicalize: matrix over a different field");
  if (det(g).v == 0) throw DomainError("canonicalize: singular matrix");
  auto d = pattern_solve(lang_value(g), n_not_wn_, wn_, true);
  if (!d) throw DomainError("canonicalize: g^{-1} sigma(g) is not in N w sigma(N)");
  const FqMatrix g1 = g * inverse(*d);
  const FqMatrix y = lang_value(g1);
  if (!in_pattern(y, wn_)) throw InvariantViolation("canonical_step", "first correction left Ad(w sigma)(N)");
  const auto as = solve_artin_schreier(pi_w(y));
  FqMatrix rep = g1 * as.h;
  if (!is_point(rep)) throw InvariantViolation("canonical_step", "representative not over U_{mu<0}");
  return {std::move(rep), m_};
}

FqMatrix DLContext::inertia_matrix(std::int64_t tau) const {
  const std::uint64_t e = small_e(ld_->e);
  const Fq z = field_->root_of_unity(e);
  FqMatrix t(field_, n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    t(i, i) = field_->pow(z, exponent_mod(checked_mul(tau % static_cast<std::int64_t>(e), ld_->e_lambda[i]), e));
  return t;
}

YwPoint DLContext::act(const YwPoint& pt, const FqMatrix& g0, const FqMatrix& mm, std::int64_t tau) const {
  if (g0.field() != field_ || mm.field() != field_ || pt.rep.field() != field_)
    throw DomainError("act: matrices over different fields");
  if (!(g0.frobenius() == g0) || det(g0).v == 0) throw DomainError("act: g0 is not in G(F_q)");
  if (!in_levi(mm) || det(mm).v == 0 || !(ad_wsigma(mm) == mm)) throw DomainError("act: m is not in M^{w sigma}");
  return canonicalize(g0 * pt.rep * inverse(mm) * inertia_matrix(tau));
}

YwEnumeration enumerate_Yw(const DLContext& ctx, std::uint64_t budget) {
  YwEnumeration out;
  enumerate_group(
      ctx.field(), ctx.n(),
      [&](const FqMatrix& g) {
        FqMatrix x = ctx.lang_value(g);
        if (!ctx.in_u_mu_neg(x)) return;
        out.points.push_back({g, ctx.level()});
        ++out.fibers[x];
      },
      budget);
  return out;
}

std::optional<FqMatrix> lang_preimage(const FieldPtr& field, const FqMatrix& x) {
  const auto& F = *field;
  const std::size_t n = x.rows();
  if (det(x).v == 0) throw DomainError("lang_preimage: singular matrix");
  // g^{-1} sigma(g) = x has a rational solution iff x sigma(x) ... sigma^{m-1}(x) = 1
  FqMatrix norm = FqMatrix::identity(field, n), cur = x;
  for (unsigned k = 0; k < F.m(); ++k) {
    norm = norm * cur;
    cur = cur.frobenius();
  }
  if (!norm.is_identity()) return std::nullopt;

  // sigma(g) - g x is F_p-linear in the n^2 * degree prime-field coordinates of g
  const std::size_t d = F.degree(), dim = n * n * d;
  const auto Fp = FiniteField::make(F.p(), 1, 1);
  FqMatrix lin(Fp, dim, dim);
  std::uint64_t basis = 1;
  std::vector<Fq> basis_elems;
  for (std::size_t k = 0; k < d; ++k, basis *= F.p()) basis_elems.push_back(F.element(basis));
  for (std::size_t col = 0; col < dim; ++col) {
    FqMatrix g(field, n, n);
    g((col / d) / n, (col / d) % n) = basis_elems[col % d];
    const FqMatrix img = g.frobenius() - g * x;
    for (std::size_t e = 0; e < n * n; ++e) {
      const auto c = F.coords(img.data()[e]);
      for (std::size_t k = 0; k < d; ++k) lin(e * d + k, col) = Fq{c[k]};
    }
  }
  const auto kernel = nullspace(lin);
  std::mt19937_64 rng(0x5eed);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<std::uint32_t> coords(dim, 0);
    for (const auto& v : kernel) {
      const std::uint32_t c = static_cast<std::uint32_t>(rng() % F.p());
      for (std::size_t k = 0; k < dim; ++k) coords[k] = static_cast<std::uint32_t>((coords[k] + c * v[k].v) % F.p());
    }
    FqMatrix g(field, n, n);
    for (std::size_t e = 0; e < n * n; ++e)
      g(e / n, e % n) = F.from_coords(std::vector<std::uint32_t>(coords.begin() + e * d, coords.begin() + (e + 1) * d));
    if (det(g).v) return g;
  }
  throw InvariantViolation("lang_torsor", "no invertible solution found");
}

MwsigmaPoints m_wsigma_points(const ShimuraDatum& sd, const LambdaData& ld, unsigned level, std::uint64_t budget) {
  const unsigned lvl = level ? level : static_cast<unsigned>(ld.N);
  DLContext ctx(sd, ld, lvl);
  const auto& field = ctx.field();
  const std::size_t n = ctx.n();
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 1; i < n; ++i)
    if (ld.lambda[i] != ld.lambda[i - 1]) starts.push_back(i);
  starts.push_back(n);

  Integer total = 1;
  for (std::size_t b = 0; b + 1 < starts.size(); ++b) total *= gl_group_order(starts[b + 1] - starts[b], field->size());
  if (total > Integer(static_cast<unsigned long>(budget)))
    throw SizeError("|M(F_" + std::to_string(field->size()) + ")| exceeds the budget");

  std::vector<std::vector<FqMatrix>> blocks;
  for (std::size_t b = 0; b + 1 < starts.size(); ++b) {
    blocks.emplace_back();
    enumerate_group(field, starts[b + 1] - starts[b], [&](const FqMatrix& g) { blocks.back().push_back(g); });
  }
  MwsigmaPoints out{0, {}, field};
  std::vector<std::size_t> digit(blocks.size(), 0);
  while (true) {
    FqMatrix x(field, n, n);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& g = blocks[b][digit[b]];
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) x(starts[b] + i, starts[b] + j) = g(i, j);
    }
    if (ctx.ad_wsigma(x) == x) out.elements.push_back(std::move(x));
    std::size_t pos = 0;
    while (pos < blocks.size() && ++digit[pos] == blocks[pos].size()) digit[pos++] = 0;
    if (pos == blocks.size()) break;
  }
  out.order = out.elements.size();
  return out;
}

std::vector<Fq> inertia_torus_element(const FieldPtr& field, const LambdaData& ld, std::int64_t tau) {
  const std::uint64_t e = small_e(ld.e);
  const Fq z = field->root_of_unity(e);
  std::vector<Fq> out;
  for (auto x : ld.e_lambda)
    out.push_back(field->pow(z, exponent_mod(-checked_mul(tau % static_cast<std::int64_t>(e), x), e)));
  return out;
}

std::string export_points(const std::vector<YwPoint>& points) {
  std::ostringstream os;
  for (const auto& p : points) os << p.rep.to_line() << '\n';
  return os.str();
}

}  // namespace depthzero
