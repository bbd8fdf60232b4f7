#pragma once

#include <string>
#include <vector>

#include "depthzero/lambda_engine.hpp"
#include "json.hpp"

namespace depthzero {

using Json = nlohmann::ordered_json;

/// A parsed input document:
///
///   {"name": "gl3_p2",
///    "group": {"type": "gl", "n": 3},
///    "q": 2,
///    "mu": [-1, 0, 0],
///    "v": [[[0,0,1],[1,0,0],[0,1,0]]]}
///
/// "group" is {"type": "gl", "n"}, {"type": "torus", "rank"},
/// {"type": "product", "factors": [...]} or
/// {"type": "restriction", "base": {...}, "degree": k}. "v" is optional:
/// extra Weyl-side matrices for the component group.
struct GroupSpec {
  std::string name;
  Json group;
  ShimuraDatum sd;
  std::vector<IntMatrix> extra_v;
};

/// ParseError for malformed JSON, unknown group types, a q that is not a
/// prime power, or a mu that is not dominant minuscule.
GroupSpec parse_group_spec(const std::string& text);
GroupSpec load_group_spec(const std::string& path);

BasedRootDatum datum_from_json(const Json& group);

}  // namespace depthzero
