#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace drw {

enum class ErrorCode {
  InvalidArgument,
  NotFound,
  GridTooLarge,
  GridTooCoarse,
  BelowCutoff,
  NoGuidedMode,
  IncompatibleGrids,
  InsufficientGrid,
  TaperInfeasible,
  UnknownKey,
  MissingUnit,
  UnsupportedSchemaVersion,
  Io,
  Solver,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers branch on code().
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
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::BelowCutoff: return "BelowCutoff";
    case ErrorCode::NoGuidedMode: return "NoGuidedMode";
    case ErrorCode::IncompatibleGrids: return "IncompatibleGrids";
    case ErrorCode::InsufficientGrid: return "InsufficientGrid";
    case ErrorCode::TaperInfeasible: return "TaperInfeasible";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::MissingUnit: return "MissingUnit";
    case ErrorCode::UnsupportedSchemaVersion: return "UnsupportedSchemaVersion";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Solver: return "Solver";
  }
  return "Unknown";
}

}  // namespace drw
