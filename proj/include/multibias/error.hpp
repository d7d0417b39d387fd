#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace multibias {

enum class ErrorCode {
  DuplicateBias,
  RareOutcomeRequired,
  SelectedPopulationConflict,
  MissingParameter,
  UnknownParameter,
  DomainError,
  StructureMismatch,
  DegenerateStratum,
  InfeasibleConfig,
  ParseError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateBias: return "DuplicateBias";
    case ErrorCode::RareOutcomeRequired: return "RareOutcomeRequired";
    case ErrorCode::SelectedPopulationConflict: return "SelectedPopulationConflict";
    case ErrorCode::MissingParameter: return "MissingParameter";
    case ErrorCode::UnknownParameter: return "UnknownParameter";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::StructureMismatch: return "StructureMismatch";
    case ErrorCode::DegenerateStratum: return "DegenerateStratum";
    case ErrorCode::InfeasibleConfig: return "InfeasibleConfig";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library. `subject()` carries the offending
/// parameter name or token when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string subject = {})
      : std::runtime_error(message), code_(code), subject_(std::move(subject)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

}  // namespace multibias
