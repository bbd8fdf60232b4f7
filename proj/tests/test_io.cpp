#include <random>

#include "depthzero/dossier.hpp"
#include "depthzero/errors.hpp"
#include "depthzero/group_spec.hpp"
#include "depthzero/vector_file.hpp"
#include "doctest.h"

using namespace depthzero;

namespace {

const char* kGl3 = R"({"name": "gl3", "group": {"type": "gl", "n": 3}, "q": 2, "mu": [-1, 0, 0]})";

Json ledger_entry(const Json& doc, const std::string& name) {
  for (const auto& c : doc.at("ledger"))
    if (c.at("name") == name) return c;
  return nullptr;
}

}  // namespace

TEST_CASE("group spec parsing") {
  const auto gs = parse_group_spec(kGl3);
  CHECK(gs.name == "gl3");
  CHECK(gs.sd.datum.rank() == 3);
  CHECK(gs.sd.q.q == 2);
  CHECK(gs.sd.mu == IntVector{-1, 0, 0});

  const auto prod = parse_group_spec(
      R"({"group": {"type": "product", "factors": [{"type": "gl", "n": 2}, {"type": "torus", "rank": 1}]},
          "q": 4, "mu": [-1, 0, 0]})");
  CHECK(prod.sd.datum.rank() == 3);
  CHECK(prod.name == "unnamed");

  const auto res = parse_group_spec(
      R"({"group": {"type": "restriction", "base": {"type": "gl", "n": 2}, "degree": 2}, "q": 2, "mu": [-1, 0, -1, 0]})");
  CHECK(res.sd.datum.sigma_order() == 2);

  const auto with_v = parse_group_spec(
      R"({"group": {"type": "gl", "n": 2}, "q": 3, "mu": [-1, 0], "v": [[[1, 0], [0, 1]]]})");
  REQUIRE(with_v.extra_v.size() == 1);
  CHECK(with_v.extra_v[0].is_identity());
}

TEST_CASE("group spec rejections") {
  const char* bad[] = {
      "not json",
      "[1, 2]",
      R"({"q": 2, "mu": [0]})",
      R"({"group": {"type": "sp", "n": 2}, "q": 2, "mu": [0, 0]})",
      R"({"group": {"type": "gl", "n": 2}, "q": 6, "mu": [-1, 0]})",
      R"({"group": {"type": "gl", "n": 2}, "q": 1, "mu": [-1, 0]})",
      R"({"group": {"type": "gl", "n": 2}, "q": 2, "mu": [-1, 0, 0]})",
      R"({"group": {"type": "gl", "n": 2}, "q": 2, "mu": [0, -1]})",
      R"({"group": {"type": "gl", "n": 2}, "q": 2, "mu": [-2, 0]})",
      R"({"group": {"type": "gl", "n": 2}, "q": 2, "mu": [-1, 0], "v": [[[1, 0]]]})",
      R"({"group": {"type": "gl", "n": 0}, "q": 2, "mu": []})",
  };
  for (const char* text : bad) CHECK_THROWS_AS(parse_group_spec(text), ParseError);
  CHECK_THROWS_AS(load_group_spec("/nonexistent/spec.json"), ParseError);
}

TEST_CASE("dossier for the GL_3 Lubin-Tate datum") {
  DossierOptions opts;
  opts.count_max_m = 1;
  const auto d = build_dossier(parse_group_spec(kGl3), opts);
  const auto& doc = d.doc;
  CHECK(d.all_pass());
  CHECK(doc.at("all_pass").get<bool>());
  CHECK(doc.at("e") == 7);
  CHECK(doc.at("e_lambda") == Json({1, 2, 4}));
  CHECK(doc.at("lambda") == Json({"1/7", "2/7", "4/7"}));
  CHECK(doc.at("dim_r") == 2);
  CHECK(doc.at("weil").at("d") == 3);
  CHECK(doc.at("weil").at("mu_d") == Json({-1, -1, -1}));
  CHECK(doc.at("component_group").at("w") == Json({1, 1, 0}));
  CHECK(doc.at("facet").at("minimal").get<bool>());
  CHECK(doc.at("m_wsigma_order") == 7);
  CHECK(doc.at("fan").at("maximal_cones") == 24);
  CHECK(doc.at("fan").at("limit_point_label") == "sigma_0");
  CHECK(doc.at("w").at("permutation") == Json({1, 2, 0}));
  REQUIRE(doc.at("yw_counts").size() == 1);
  CHECK(doc.at("yw_counts")[0].at("torsor_order") == 168);
  CHECK(ledger_entry(doc, "yw_torsor_m1").at("pass").get<bool>());

  const auto report = render_report(doc);
  CHECK(report.find("e = 7") != std::string::npos);
  CHECK(report.find("pass\n") != std::string::npos);
}

TEST_CASE("dossier output is deterministic") {
  DossierOptions opts;
  opts.seed = 11;
  const auto a = build_dossier(parse_group_spec(kGl3), opts).doc.dump();
  const auto b = build_dossier(parse_group_spec(kGl3), opts).doc.dump();
  CHECK(a == b);
}

TEST_CASE("dossier for nonsplit and non-minimal data") {
  const auto d = build_dossier(
      parse_group_spec(
          R"({"group": {"type": "restriction", "base": {"type": "gl", "n": 2}, "degree": 2}, "q": 2, "mu": [-1, 0, -1, 0]})"),
      {});
  CHECK(d.all_pass());
  CHECK_FALSE(d.doc.at("facet").at("minimal").get<bool>());
  CHECK(d.doc.at("facet").contains("witness"));
  CHECK(d.doc.at("weil").contains("unsupported"));
  CHECK(d.doc.at("fan").is_null());
  CHECK(render_report(d.doc).find("split case only") != std::string::npos);

  const auto z = build_dossier(parse_group_spec(R"({"group": {"type": "gl", "n": 2}, "q": 2, "mu": [0, 0]})"), {});
  CHECK(z.all_pass());
  CHECK(z.doc.at("e") == 1);
  CHECK(z.doc.at("facet").at("minimal").get<bool>());
}

TEST_CASE("dossier enumeration budget") {
  DossierOptions opts;
  opts.count_max_m = 3;
  opts.budget = 10;
  CHECK_THROWS_AS(build_dossier(parse_group_spec(kGl3), opts), SizeError);
}

TEST_CASE("vector file round trip") {
  const auto F = FiniteField::make(3, 1, 2);
  std::mt19937_64 rng(5);
  std::vector<VectorRecord> recs;
  for (int k = 0; k < 20; ++k) recs.push_back({"r" + std::to_string(k), random_normalized_level_vector(F, 2, rng)});
  std::string text = "# header\n\n";
  for (const auto& r : recs) text += vector_record_line(r) + "\n";
  const auto back = parse_vector_file(text);
  REQUIRE(back.size() == recs.size());
  for (std::size_t k = 0; k < recs.size(); ++k) {
    CHECK(back[k].name == recs[k].name);
    REQUIRE(back[k].vector.n() == recs[k].vector.n());
    for (std::size_t i = 0; i < recs[k].vector.n(); ++i) CHECK(back[k].vector.t[i] == recs[k].vector.t[i]);
    CHECK(vector_record_line(back[k]) == vector_record_line(recs[k]));
  }
}

TEST_CASE("vector file rejections") {
  const char* bad[] = {
      R"({"p": 2, "m": 2, "ram": 3, "trunc": 3})",
      R"({"p": 2, "m": 2, "ram": 3, "trunc": 3, "t": []})",
      R"({"p": 2, "m": 2, "ram": 3, "trunc": 3, "t": [[["1/2", [1, 0]]]]})",
      R"({"p": 2, "m": 2, "ram": 3, "trunc": 3, "t": [[["4", [1, 0]]]]})",
      R"({"p": 2, "m": 2, "ram": 3, "trunc": 3, "t": [[["1/3", [2, 0]]]]})",
      R"({"p": 2, "m": 2, "ram": 3, "trunc": 3, "t": [[["x", [1, 0]]]]})",
      R"({"p": 6, "m": 2, "ram": 3, "trunc": 3, "t": [[["1/3", [1, 0]]]]})",
      "{broken",
  };
  for (const char* line : bad) CHECK_THROWS_AS(parse_vector_file(std::string("# c\n") + line), ParseError);
  try {
    parse_vector_file(std::string("\n") + bad[0]);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}
