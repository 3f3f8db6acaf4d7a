#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace oscc {

enum class ErrorCode {
  kNonMonotoneMarginals,
  kPriceBoundViolation,
  kNonPositiveCapacity,
  kInvalidCostModel,
  kIndexOutOfRange,
  kPriceOutOfRange,
  kValueOutOfRange,
  kInvalidThreshold,
  kBracketingFailed,
  kNoConvergence,
  kNoConsistentTau,
  kNotLinearFamily,
  kCaseNotApplicable,
  kMaxDepthExceeded,
  kNoRootInStep,
  kUnsupportedForTable,
  kBlowUp,
  kStiffStep,
  kScenarioOutOfRange,
  kParseError,
  kUnknownCostFamily,
  kSchemaViolation,
  kIoError,
};

std::string_view error_name(ErrorCode code);

// True for numerical failures (bracketing, convergence) as opposed to bad input.
bool is_convergence_failure(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace oscc
