#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symgeo {

enum class ErrorCode {
  InvalidArgument,
  DimMismatch,
  PartyOutOfRange,
  WrongArity,
  NotSymmetric,
  NotNonnegative,
  NotConverged,
  BudgetExceeded,
  NonPositiveLambda,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::PartyOutOfRange: return "PartyOutOfRange";
    case ErrorCode::WrongArity: return "WrongArity";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotNonnegative: return "NotNonnegative";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NonPositiveLambda: return "NonPositiveLambda";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace symgeo
