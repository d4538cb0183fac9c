#include "graphscat/errors.hpp"

namespace graphscat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorCode::SpectralGapViolation: return "SpectralGapViolation";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::SingularWeightMatrix: return "SingularWeightMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidPathEntry: return "InvalidPathEntry";
    case ErrorCode::PathBudgetExceeded: return "PathBudgetExceeded";
    case ErrorCode::SingularAlignment: return "SingularAlignment";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace graphscat
