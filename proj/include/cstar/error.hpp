#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cstar {

enum class ErrorKind {
  NotHermitian,
  NotPSD,
  NoConvergence,
  NotUnital,
  NotCP,
  AlgebraMismatch,
  NotAnAlgebra,
  SchwarzViolation,
  InvalidState,
  DegenerateState,
  NotInvariant,
  NotSeparating,
  NotFaithful,
  ModularObstruction,
  NotUcp,
  GramNotPSD,
  IllDefined,
  DimensionCap,
  BudgetExceeded,
  NotEquivalent,
  PreconditionFailed,
  NotMultiplicative,
  NoAdjoint,
  NotASection,
  Inconsistent,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cstar
