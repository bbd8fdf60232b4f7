#pragma once

#include <string>
#include <vector>

#include "depthzero/lt_specialize.hpp"

namespace depthzero {

/// One level vector per line, as a JSON object:
///
///   {"name": "v1", "p": 2, "m": 2, "ram": 3, "trunc": "4",
///    "t": [[["1/3", [1, 0]]], [["1/3", [0, 1]], ["2/3", [1, 1]]]]}
///
/// "p", "f" (default 1) and "m" name the coefficient field F_{p^{fm}}; each
/// coordinate of "t" is a list of [exponent, tower coordinates] terms with
/// exponents in (1/ram)Z below "trunc". Blank lines and lines starting with
/// '#' are skipped.
struct VectorRecord {
  std::string name;
  LevelVector vector;
};

/// ParseError names the offending line.
std::vector<VectorRecord> parse_vector_file(const std::string& text);
std::vector<VectorRecord> load_vector_file(const std::string& path);
std::string vector_record_line(const VectorRecord& rec);

}  // namespace depthzero
