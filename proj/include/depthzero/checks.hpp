#pragma once

#include <string>
#include <vector>

namespace depthzero {

/// One named structural identity and whether it held.
struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

inline bool all_pass(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace depthzero
