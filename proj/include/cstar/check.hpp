#pragma once

// A named residual certificate. Every verification in the library reports
// through this type; the CLI serializes it unchanged.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace cstar {

struct Check {
  std::string id;
  std::string description;
  double residual = 0.0;
  double threshold = 0.0;
  std::string anchor;

  bool pass() const { return std::isfinite(residual) && residual <= threshold; }
};

using Checks = std::vector<Check>;

inline bool all_pass(const Checks& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
}

inline const Check* find_check(const Checks& checks, const std::string& id) {
  for (const auto& c : checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

inline void append(Checks& into, const Checks& more) { into.insert(into.end(), more.begin(), more.end()); }

}  // namespace cstar
