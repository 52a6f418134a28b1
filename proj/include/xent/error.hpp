#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xent {

enum class ErrorCode {
  InvalidArgument,
  InvalidModel,
  NonStochastic,
  NonUniqueStationary,
  Reducible,
  SymbolOutOfRange,
  AlphabetMismatch,
  BudgetExceeded,
  TruncationBreach,
  TruncationTooSmall,
  NotSurjective,
  PatternTooLong,
  GridExceedsWindow,
  AbsoluteContinuityViolation,
  NoGapFound,
  InvalidSpec,
  Io,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::NonStochastic: return "NonStochastic";
    case ErrorCode::NonUniqueStationary: return "NonUniqueStationary";
    case ErrorCode::Reducible: return "Reducible";
    case ErrorCode::SymbolOutOfRange: return "SymbolOutOfRange";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::TruncationBreach: return "TruncationBreach";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::NotSurjective: return "NotSurjective";
    case ErrorCode::PatternTooLong: return "PatternTooLong";
    case ErrorCode::GridExceedsWindow: return "GridExceedsWindow";
    case ErrorCode::AbsoluteContinuityViolation: return "AbsoluteContinuityViolation";
    case ErrorCode::NoGapFound: return "NoGapFound";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto stable exit codes and messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace xent
