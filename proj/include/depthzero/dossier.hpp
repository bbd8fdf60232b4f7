#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "depthzero/checks.hpp"
#include "depthzero/group_spec.hpp"

namespace depthzero {

struct DossierOptions {
  unsigned count_max_m = 0;  // Y(w) counts for m = 1..count_max_m
  std::uint64_t budget = 10000000;
  std::uint64_t seed = 0;
  std::size_t fan_max_n = 4;
};

struct Dossier {
  Json doc;
  std::vector<CheckResult> ledger;
  bool all_pass() const { return depthzero::all_pass(ledger); }
};

/// Every invariant of the datum plus a ledger of named checks. SizeError
/// when an enumeration exceeds the budget.
Dossier build_dossier(const GroupSpec& spec, const DossierOptions& opts);

/// Human-readable summary of a dossier document.
std::string render_report(const Json& doc);

}  // namespace depthzero
