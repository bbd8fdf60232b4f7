#include "depthzero/dossier.hpp"

#include <random>
#include <set>
#include <sstream>

#include "depthzero/alcove.hpp"
#include "depthzero/dl_variety.hpp"
#include "depthzero/errors.hpp"
#include "depthzero/toroidal_fan.hpp"

namespace depthzero {

namespace {

Json rat_json(const RatVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

Json int_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

Json matrix_json(const IntMatrix& m) {
  Json out = Json::array();
  for (const auto& r : m.to_rows()) out.push_back(r);
  return out;
}

Json roots_json(const BasedRootDatum& d, const std::vector<std::size_t>& idx) {
  Json out = Json::array();
  for (auto i : idx) out.push_back(d.roots()[i]);
  return out;
}

Json factors_json(const std::vector<Integer>& f) {
  Json out = Json::array();
  for (const auto& x : f) out.push_back(int_json(x));
  return out;
}

std::size_t zero_count(const std::vector<Integer>& f) {
  std::size_t k = 0;
  for (const auto& x : f)
    if (x == 0) ++k;
  return k;
}

std::size_t fixed_rank(const IntMatrix& v_sigma) {
  return nullspace(RatMatrix::from_int(IntMatrix::identity(v_sigma.rows()) - v_sigma)).size();
}

}  // namespace

Dossier build_dossier(const GroupSpec& spec, const DossierOptions& opts) {
  const auto& sd = spec.sd;
  const auto& datum = sd.datum;
  const auto ld = compute_lambda(sd);
  Dossier out;
  auto& doc = out.doc;
  auto& ledger = out.ledger;

  doc["input"] = {{"name", spec.name},
                  {"group", spec.group},
                  {"q", sd.q.q},
                  {"mu", sd.mu},
                  {"options", {{"count_max_m", opts.count_max_m}, {"budget", opts.budget}, {"seed", opts.seed}}}};

  Json w = {{"matrix", matrix_json(sd.w.matrix)}, {"word", sd.w.word}};
  if (datum.gl_size()) {
    std::vector<std::size_t> perm(datum.rank());
    for (std::size_t i = 0; i < datum.rank(); ++i)
      for (std::size_t r = 0; r < datum.rank(); ++r)
        if (sd.w.matrix(r, i) == 1) perm[i] = r;
    w["permutation"] = perm;
  }
  doc["w"] = w;
  doc["b"] = {{"description", "mu(-pi) w"}, {"mu", sd.mu}, {"w_word", sd.w.word}};

  doc["lambda"] = rat_json(ld.lambda);
  doc["N"] = ld.N;
  doc["e"] = int_json(ld.e);
  doc["e_lambda"] = ld.e_lambda;
  Json radii = Json::array();
  const std::set<std::size_t> neg(ld.phi_mu_neg.begin(), ld.phi_mu_neg.end());
  for (std::size_t i = 0; i < datum.num_roots(); ++i)
    radii.push_back({{"root", datum.roots()[i]}, {"r", to_string(ld.r_alpha[i])}, {"mu_negative", neg.count(i) == 1}});
  doc["r_alpha"] = radii;
  doc["roots"] = {{"phi_M", roots_json(datum, ld.phi_M)},
                  {"phi_N", roots_json(datum, ld.phi_N)},
                  {"phi_Nbar", roots_json(datum, ld.phi_Nbar)},
                  {"phi_mu_neg", roots_json(datum, ld.phi_mu_neg)},
                  {"phi_mu_pos", roots_json(datum, ld.phi_mu_pos)}};
  doc["dim_r"] = ld.dim_r;
  for (const auto& c : lambda_checks(sd, ld)) ledger.push_back(c);

  {
    const auto x = alcove_interior_point(datum);
    RatVector y = sd.w.matrix * x;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= Rational(static_cast<long>(sd.mu[i]));
    ledger.push_back({"alcove_stabilized", base_alcove_contains(datum, y), "x -> w x - mu keeps the base alcove"});
  }

  const auto facet = facet_of_lambda(datum, ld.lambda, sd.mu, sd.w.matrix);
  const auto minimality = facet_minimality(datum, sd.w.matrix, ld.lambda);
  doc["facet"] = {{"zero_roots", roots_json(datum, facet.zero_roots)},
                  {"sample_interior_point", rat_json(facet.sample_interior_point)},
                  {"orbit_in_facet_span", facet.orbit_in_facet_span},
                  {"orbit_spans_facet", facet.orbit_spans_facet},
                  {"minimal", minimality.minimal},
                  {"fixed_quotient_dim", minimality.fixed_quotient_dim}};
  if (!minimality.minimal) doc["facet"]["witness"] = rat_json(minimality.witness);
  ledger.push_back({"facet_orbit_in_span", facet.orbit_in_facet_span, "b sigma orbit lies in the facet span"});
  ledger.push_back({"facet_orbit_spans_when_minimal", !minimality.minimal || facet.orbit_spans_facet,
                    "a minimal facet is spanned by the orbit and the center"});

  try {
    const auto wd = weil_d(sd);
    doc["weil"] = {{"d", wd.d}, {"mu_d", wd.mu_d}};
    ledger.push_back({"weil_mu_d_central",
                      datum.is_central(to_rational(wd.mu_d)) && power(sd.w.matrix, wd.d).is_identity(),
                      "w^d = 1 and mu_d central"});
  } catch (const UnsupportedCase& e) {
    doc["weil"] = {{"unsupported", e.what()}};
  }

  {
    const auto f = component_group(datum, ld.wsigma);
    Json user = Json::array();
    bool ranks = zero_count(f) == fixed_rank(ld.wsigma);
    for (const auto& v : spec.extra_v) {
      const IntMatrix vs = v * datum.sigma();
      const auto fv = component_group(datum, vs);
      ranks = ranks && zero_count(fv) == fixed_rank(vs);
      user.push_back({{"v", matrix_json(v)}, {"factors", factors_json(fv)}});
    }
    doc["component_group"] = {{"w", factors_json(f)}, {"user", user}};
    ledger.push_back({"component_group_free_rank", ranks, "free rank equals the fixed rank of v sigma"});
  }

  if (const auto order = m_wsigma_order(sd, ld))
    doc["m_wsigma_order"] = int_json(*order);
  else
    doc["m_wsigma_order"] = nullptr;

  const bool matrix_level = datum.gl_size().has_value() && datum.sigma_order() == 1;
  Json counts = Json::array();
  if (matrix_level) {
    const std::size_t n = *datum.gl_size();
    const Integer torsor = gl_order(n, Integer(static_cast<unsigned long>(sd.q.q)));
    for (unsigned m = 1; m <= opts.count_max_m; ++m) {
      const DLContext ctx(sd, ld, m);
      const auto en = enumerate_Yw(ctx, opts.budget);
      std::set<std::uint64_t> sizes;
      std::uint64_t total = 0;
      for (const auto& [base, c] : en.fibers) {
        sizes.insert(c);
        total += c;
      }
      bool ok = total == en.points.size();
      for (auto s : sizes) ok = ok && Integer(static_cast<unsigned long>(s)) == torsor;
      counts.push_back({{"m", m},
                        {"points", en.points.size()},
                        {"nonempty_fibers", en.fibers.size()},
                        {"fiber_sizes", Json(std::vector<std::uint64_t>(sizes.begin(), sizes.end()))},
                        {"torsor_order", int_json(torsor)}});
      ledger.push_back({"yw_torsor_m" + std::to_string(m), ok, "every nonempty Lang fiber is a G^sigma torsor"});
    }
  }
  doc["yw_counts"] = counts;

  if (matrix_level && *datum.gl_size() <= opts.fan_max_n) {
    const std::size_t n = *datum.gl_size();
    const auto fan = kgl_fan(n);
    bool dd = true;
    for (const auto& c : fan.cones) dd = dd && double_description_consistent(c);
    const bool stable = weyl_stable(fan);
    const bool faces = faces_consistent(fan);
    std::mt19937_64 rng(opts.seed);
    std::size_t located = 0;
    const std::size_t samples = 200;
    for (std::size_t k = 0; k < samples; ++k) {
      RatVector v;
      for (std::size_t i = 0; i < n; ++i) {
        Rational x(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 3));
        x.canonicalize();
        v.push_back(x);
      }
      if (cone_contains(locate(fan, v), v)) ++located;
    }
    doc["fan"] = {{"n", n},
                  {"maximal_cones", fan.cones.size()},
                  {"limit_point_label", locate(fan, to_rational(ld.e_lambda)).label},
                  {"weyl_stable", stable},
                  {"double_description", dd},
                  {"faces_consistent", faces},
                  {"sampled_located", located}};
    ledger.push_back({"fan_weyl_stable", stable, "KGL_n fan is stable under coordinate permutations"});
    ledger.push_back({"fan_double_description", dd, "generators and inequalities describe the same cones"});
    ledger.push_back({"fan_faces_consistent", faces, "maximal cones meet along common faces"});
    ledger.push_back({"fan_sampled_locate", located == samples, "sampled vectors are located"});
  } else {
    doc["fan"] = nullptr;
  }

  Json lj = Json::array();
  for (const auto& c : ledger) lj.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  doc["ledger"] = lj;
  doc["all_pass"] = out.all_pass();
  return out;
}

std::string render_report(const Json& doc) {
  std::ostringstream os;
  const auto& in = doc.at("input");
  os << "datum " << in.at("name").get<std::string>() << ": q = " << in.at("q").dump() << ", mu = " << in.at("mu").dump()
     << '\n';
  os << "w word " << doc.at("w").at("word").dump() << ", N = " << doc.at("N").dump() << ", e = " << doc.at("e").dump()
     << '\n';
  os << "e lambda = " << doc.at("e_lambda").dump() << ", dim_r = " << doc.at("dim_r").dump() << '\n';
  os << "facet minimal: " << (doc.at("facet").at("minimal").get<bool>() ? "yes" : "no") << '\n';
  if (doc.at("weil").contains("d"))
    os << "Weil integer d = " << doc.at("weil").at("d").dump() << ", mu_d = " << doc.at("weil").at("mu_d").dump()
       << '\n';
  else
    os << "Weil integer: split case only\n";
  os << "component group of 1 - w sigma: " << doc.at("component_group").at("w").dump() << '\n';
  os << "M^{w sigma} order: " << doc.at("m_wsigma_order").dump() << '\n';
  for (const auto& c : doc.at("yw_counts"))
    os << "Y(w) over F_{q^" << c.at("m").dump() << "}: " << c.at("points").dump() << " points in "
       << c.at("nonempty_fibers").dump() << " fibers of size " << c.at("fiber_sizes").dump() << '\n';
  if (!doc.at("fan").is_null())
    os << "fan KGL_" << doc.at("fan").at("n").dump() << ": " << doc.at("fan").at("maximal_cones").dump()
       << " maximal cones, e lambda in " << doc.at("fan").at("limit_point_label").get<std::string>() << '\n';
  std::size_t pass = 0, total = 0;
  std::string failed;
  for (const auto& c : doc.at("ledger")) {
    ++total;
    if (c.at("pass").get<bool>())
      ++pass;
    else
      failed += " " + c.at("name").get<std::string>();
  }
  os << "checks: " << pass << "/" << total << " pass";
  if (!failed.empty()) os << "; failed:" << failed;
  os << '\n';
  return os.str();
}

}  // namespace depthzero
