#pragma once

// Residual reports produced by the command runner, with deterministic JSON
// and text serialization.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cstar/check.hpp"

namespace cstar {

struct ReportError {
  std::string command;
  std::string kind;
  std::string message;

  bool operator==(const ReportError&) const = default;
};

struct Report {
  std::string command;
  std::string system;
  Checks checks;
  /// Stages that did not apply, with the reason.
  std::vector<std::string> skipped;
  std::vector<ReportError> errors;
  std::map<std::string, double> timings;  // milliseconds per stage
  nlohmann::json data = nlohmann::json::object();

  bool pass() const { return errors.empty() && all_pass(checks); }
  void sort_checks();
};

enum class Format { Json, Text };

/// Emits checks sorted by id. Timings are the only nondeterministic field.
std::string emit_report(const Report& r, Format format);
nlohmann::json report_to_json(const Report& r);
/// Inverse of report_to_json. Throws ParseError.
Report report_from_json(const nlohmann::json& j);
Report parse_report(const std::string& text);

}  // namespace cstar
