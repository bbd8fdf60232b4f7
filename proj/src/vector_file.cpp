#include "depthzero/vector_file.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include "depthzero/errors.hpp"
#include "json.hpp"

namespace depthzero {

namespace {

using Json = nlohmann::ordered_json;

Rational parse_rational(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  if (!j.is_string()) throw ParseError("exponents and truncations are integers or strings like \"1/3\"");
  try {
    Rational r(j.get<std::string>());
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational '" + j.get<std::string>() + "'");
  }
}

VectorRecord parse_record(const Json& doc) {
  if (!doc.is_object()) throw ParseError("record must be a JSON object");
  for (const char* key : {"p", "m", "ram", "trunc", "t"})
    if (!doc.contains(key)) throw ParseError(std::string("record needs '") + key + "'");
  const auto p = doc.at("p").get<std::int64_t>();
  const auto f = doc.value("f", std::int64_t{1});
  const auto m = doc.at("m").get<std::int64_t>();
  const auto ram = doc.at("ram").get<std::int64_t>();
  if (p < 2 || f < 1 || m < 1 || ram < 1) throw ParseError("p, f, m and ram must be positive");
  FieldPtr field;
  try {
    field = FiniteField::make(static_cast<std::uint64_t>(p), static_cast<unsigned>(f), static_cast<unsigned>(m));
  } catch (const Error& e) {
    throw ParseError(std::string("bad field: ") + e.what());
  }
  const Rational trunc = parse_rational(doc.at("trunc"));
  VectorRecord rec{doc.value("name", std::string()), {field, {}}};
  if (!doc.at("t").is_array() || doc.at("t").empty()) throw ParseError("'t' must be a nonempty list");
  for (const auto& coord : doc.at("t")) {
    Puiseux x = Puiseux::zero(field, trunc, ram);
    if (!coord.is_array()) throw ParseError("each coordinate is a list of terms");
    for (const auto& term : coord) {
      if (!term.is_array() || term.size() != 2) throw ParseError("a term is [exponent, coordinates]");
      const Rational e = parse_rational(term[0]);
      Rational scaled = e * Rational(static_cast<long>(ram));
      scaled.canonicalize();
      if (scaled.get_den() != 1) throw ParseError("exponent " + to_string(e) + " is not in (1/ram)Z");
      if (e >= trunc) throw ParseError("exponent " + to_string(e) + " is not below trunc");
      std::vector<std::uint32_t> c;
      for (const auto& d : term[1]) {
        const auto v = d.get<std::int64_t>();
        if (v < 0 || v >= p) throw ParseError("tower coordinate out of range");
        c.push_back(static_cast<std::uint32_t>(v));
      }
      if (c.size() > field->degree()) throw ParseError("too many tower coordinates");
      x = x + Puiseux::monomial(field, field->from_coords(c), e, trunc);
    }
    rec.vector.t.push_back(x);
  }
  return rec;
}

}  // namespace

std::vector<VectorRecord> parse_vector_file(const std::string& text) {
  std::vector<VectorRecord> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      auto rec = parse_record(Json::parse(line));
      if (rec.name.empty()) rec.name = "line" + std::to_string(lineno);
      out.push_back(std::move(rec));
    } catch (const Json::exception& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<VectorRecord> load_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_vector_file(ss.str());
}

std::string vector_record_line(const VectorRecord& rec) {
  const auto& F = rec.vector.field;
  std::int64_t ram = 1;
  Rational trunc = rec.vector.t.front().trunc();
  for (const auto& x : rec.vector.t) {
    ram = std::lcm(ram, x.ram());
    trunc = std::min(trunc, x.trunc());
  }
  Json t = Json::array();
  for (const auto& x : rec.vector.t) {
    Json terms = Json::array();
    for (const auto& [e, c] : x.terms())
      if (e < trunc) terms.push_back({to_string(e), F->coords(c)});
    t.push_back(terms);
  }
  Json doc = {{"name", rec.name}, {"p", F->p()}, {"f", F->f()}, {"m", F->m()},
              {"ram", ram},       {"trunc", to_string(trunc)}, {"t", t}};
  return doc.dump();
}

}  // namespace depthzero
