#include "depthzero/group_spec.hpp"

#include <fstream>
#include <sstream>

#include "depthzero/errors.hpp"

namespace depthzero {

namespace {

std::int64_t get_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) throw ParseError(std::string("expected integer field '") + key + "'");
  return j.at(key).get<std::int64_t>();
}

std::size_t get_size(const Json& j, const char* key, std::int64_t lo, std::int64_t hi) {
  const auto v = get_int(j, key);
  if (v < lo || v > hi)
    throw ParseError(std::string("field '") + key + "' must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<std::size_t>(v);
}

IntVector int_vector(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of integers");
  IntVector v;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw ParseError(std::string(what) + " must be an array of integers");
    v.push_back(x.get<std::int64_t>());
  }
  return v;
}

}  // namespace

BasedRootDatum datum_from_json(const Json& g) {
  if (!g.is_object() || !g.contains("type") || !g.at("type").is_string())
    throw ParseError("group must be an object with a string 'type'");
  const auto type = g.at("type").get<std::string>();
  try {
    if (type == "gl") return gl_datum(get_size(g, "n", 1, 12));
    if (type == "torus") return torus_datum(get_size(g, "rank", 1, 24));
    if (type == "product") {
      if (!g.contains("factors") || !g.at("factors").is_array() || g.at("factors").empty())
        throw ParseError("product needs a nonempty 'factors' array");
      std::vector<BasedRootDatum> factors;
      for (const auto& f : g.at("factors")) factors.push_back(datum_from_json(f));
      return product_datum(factors);
    }
    if (type == "restriction") {
      if (!g.contains("base")) throw ParseError("restriction needs a 'base' group");
      return cyclic_restriction(datum_from_json(g.at("base")), get_size(g, "degree", 1, 12));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("invalid group: ") + e.what());
  }
  throw ParseError("unknown group type '" + type + "'");
}

GroupSpec parse_group_spec(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("group spec must be a JSON object");
  if (!doc.contains("group")) throw ParseError("group spec needs a 'group' field");
  const auto datum = datum_from_json(doc.at("group"));
  const auto q = get_int(doc, "q");
  if (q < 2) throw ParseError("q must be a prime power");
  if (!doc.contains("mu")) throw ParseError("group spec needs a 'mu' field");
  const auto mu = int_vector(doc.at("mu"), "mu");
  if (mu.size() != datum.rank()) throw ParseError("mu has the wrong rank");
  try {
    factor_prime_power(static_cast<std::uint64_t>(q));
  } catch (const Error&) {
    throw ParseError("q = " + std::to_string(q) + " is not a prime power");
  }
  const auto cls = classify_cocharacter(datum, mu);
  if (!cls.dominant || !cls.minuscule) throw ParseError("mu = " + to_string(mu) + " is not dominant minuscule");

  std::vector<IntMatrix> extra;
  if (doc.contains("v")) {
    if (!doc.at("v").is_array()) throw ParseError("'v' must be a list of matrices");
    for (const auto& m : doc.at("v")) {
      if (!m.is_array()) throw ParseError("each 'v' entry must be a list of rows");
      std::vector<IntVector> rows;
      for (const auto& r : m) rows.push_back(int_vector(r, "v row"));
      if (rows.size() != datum.rank()) throw ParseError("'v' matrix has the wrong size");
      for (const auto& r : rows)
        if (r.size() != datum.rank()) throw ParseError("'v' matrix has the wrong size");
      extra.push_back(IntMatrix::from_rows(rows));
    }
  }
  std::string name = doc.value("name", std::string("unnamed"));
  return {name, doc.at("group"), make_shimura_datum(datum, static_cast<std::uint64_t>(q), mu), extra};
}

GroupSpec load_group_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_group_spec(ss.str());
}

}  // namespace depthzero
