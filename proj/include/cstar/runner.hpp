#pragma once

// Command pipelines behind the cstar executable.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cstar/report.hpp"
#include "cstar/system_spec.hpp"

namespace cstar {

struct RunOptions {
  std::size_t depth = 3;
  std::optional<std::size_t> budget;
  /// Overrides the input tolerance. Thresholds are tol, 10 tol and 100 tol
  /// for exact identities, derived identities and equivalences.
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
};

/// validate, gns, stinespring, tower, cgns-verify, adjoint, dilate, ergodic,
/// right-inverse, all.
const std::vector<std::string>& command_names();
bool is_command(const std::string& name);

/// Module errors are recorded in the report. Throws ValidationError for an
/// unknown command or invalid options.
Report run(const std::string& command, const SystemSpec& spec, const RunOptions& options = {});

/// 0 pass, 1 check failure or module error.
int exit_code(const Report& r);

}  // namespace cstar
