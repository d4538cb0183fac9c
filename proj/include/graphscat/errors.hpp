#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace graphscat {

enum class ErrorCode {
  EmptyGraph,
  DisconnectedGraph,
  NonpositiveWeight,
  SpectralGapViolation,
  EigensolverFailure,
  SingularWeightMatrix,
  DimensionMismatch,
  DomainError,
  InvalidPathEntry,
  PathBudgetExceeded,
  SingularAlignment,
  ShapeMismatch,
  HypothesisViolated,
  BudgetExceeded,
  UsageError,
  ParseError,
  LengthMismatch,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace graphscat
