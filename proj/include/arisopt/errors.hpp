#pragma once

#include <stdexcept>
#include <string>

namespace arisopt {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  Infeasible,
  DegenerateDenominator,
  InitInfeasible,
  Config,
  Io,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::DegenerateDenominator: return "degenerate denominator";
    case ErrorCode::InitInfeasible: return "initialization infeasible";
    case ErrorCode::Config: return "config error";
    case ErrorCode::Io: return "I/O error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the error-kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace arisopt
