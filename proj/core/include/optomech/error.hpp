#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace optomech {

enum class ErrorCode {
  kNonPositiveInput,
  kDegenerateInput,
  kNoConvergence,
  kDegenerateArray,
  kNoPhysicalRoot,
  kSingularDenominator,
  kInvalidBranch,
  kRegimeViolation,
  kNoMinimumInBracket,
  kDivergentDenominator,
  kNegativeStiffness,
  kSingularResolvent,
  kNoPeakInRange,
  kNotCooling,
  kUnstable,
  kParseError,
  kUnknownKey,
  kIoError,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace optomech
