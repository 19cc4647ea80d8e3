#include "cstar/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "cstar/error.hpp"

namespace cstar {

using nlohmann::json;

namespace {

// JSON has no infinity; non-finite residuals become strings.
json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorKind::ParseError, "expected a number in report");
}

}  // namespace

void Report::sort_checks() {
  std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) { return a.id < b.id; });
}

json report_to_json(const Report& r) {
  Report sorted = r;
  sorted.sort_checks();
  json checks = json::array();
  for (const auto& c : sorted.checks) {
    checks.push_back({{"id", c.id},
                      {"description", c.description},
                      {"residual", number_to_json(c.residual)},
                      {"threshold", number_to_json(c.threshold)},
                      {"pass", c.pass()},
                      {"paper_anchor", c.anchor}});
  }
  json errors = json::array();
  for (const auto& e : r.errors) errors.push_back({{"command", e.command}, {"kind", e.kind}, {"message", e.message}});
  const auto failed = std::count_if(sorted.checks.begin(), sorted.checks.end(), [](const Check& c) { return !c.pass(); });
  return {{"version", 1},
          {"command", r.command},
          {"system", r.system},
          {"summary",
           {{"pass", r.pass()},
            {"checks", sorted.checks.size()},
            {"failed", failed},
            {"errors", r.errors.size()}}},
          {"checks", checks},
          {"skipped", r.skipped},
          {"errors", errors},
          {"timings", r.timings},
          {"data", r.data}};
}

Report report_from_json(const json& j) {
  try {
    if (j.at("version").get<int>() != 1) throw Error(ErrorKind::ParseError, "unsupported report version");
    Report r;
    r.command = j.at("command").get<std::string>();
    r.system = j.at("system").get<std::string>();
    for (const auto& c : j.at("checks")) {
      r.checks.push_back({c.at("id").get<std::string>(), c.at("description").get<std::string>(),
                          number_from_json(c.at("residual")), number_from_json(c.at("threshold")),
                          c.at("paper_anchor").get<std::string>()});
    }
    r.skipped = j.at("skipped").get<std::vector<std::string>>();
    for (const auto& e : j.at("errors")) {
      r.errors.push_back(
          {e.at("command").get<std::string>(), e.at("kind").get<std::string>(), e.at("message").get<std::string>()});
    }
    r.timings = j.at("timings").get<std::map<std::string, double>>();
    r.data = j.at("data");
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

Report parse_report(const std::string& text) {
  try {
    return report_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

std::string emit_report(const Report& r, Format format) {
  if (format == Format::Json) return report_to_json(r).dump(2) + "\n";

  Report sorted = r;
  sorted.sort_checks();
  std::ostringstream out;
  out << "command: " << r.command;
  if (!r.system.empty()) out << "  system: " << r.system;
  out << "\n";
  std::size_t width = 0;
  for (const auto& c : sorted.checks) width = std::max(width, c.id.size());
  for (const auto& c : sorted.checks) {
    out << (c.pass() ? "  PASS  " : "  FAIL  ") << std::left << std::setw(static_cast<int>(width)) << c.id << "  "
        << std::scientific << std::setprecision(3) << c.residual << " <= " << c.threshold << "  [" << c.anchor
        << "]\n";
  }
  for (const auto& s : r.skipped) out << "  SKIP  " << s << "\n";
  for (const auto& e : r.errors) out << "  ERROR " << e.command << ": " << e.kind << ": " << e.message << "\n";
  out << "summary: " << (r.pass() ? "pass" : "fail") << " (" << sorted.checks.size() << " checks)\n";
  return out.str();
}

}  // namespace cstar
