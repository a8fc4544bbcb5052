#ifndef MAGSAC_CORE_ERRORS_HPP_
#define MAGSAC_CORE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace magsac {

enum class ErrorCode {
  kDegenerateSample,
  kNumericalFailure,
  kInsufficientSupport,
  kNoRealSolution,
  kParseError,
  kLabelMismatch,
  kMissingGroundTruth,
  kRetryExhausted,
  kInvalidArgument,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateSample: return "DegenerateSample";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kInsufficientSupport: return "InsufficientSupport";
    case ErrorCode::kNoRealSolution: return "NoRealSolution";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kLabelMismatch: return "LabelMismatch";
    case ErrorCode::kMissingGroundTruth: return "MissingGroundTruth";
    case ErrorCode::kRetryExhausted: return "RetryExhausted";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse errors carry the 1-based line number of the offending input line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace magsac

#endif  // MAGSAC_CORE_ERRORS_HPP_
