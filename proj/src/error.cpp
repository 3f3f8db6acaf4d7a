#include "oscc/error.hpp"

namespace oscc {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonMonotoneMarginals: return "NonMonotoneMarginals";
    case ErrorCode::kPriceBoundViolation: return "PriceBoundViolation";
    case ErrorCode::kNonPositiveCapacity: return "NonPositiveCapacity";
    case ErrorCode::kInvalidCostModel: return "InvalidCostModel";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kPriceOutOfRange: return "PriceOutOfRange";
    case ErrorCode::kValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::kInvalidThreshold: return "InvalidThreshold";
    case ErrorCode::kBracketingFailed: return "BracketingFailed";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kNoConsistentTau: return "NoConsistentTau";
    case ErrorCode::kNotLinearFamily: return "NotLinearFamily";
    case ErrorCode::kCaseNotApplicable: return "CaseNotApplicable";
    case ErrorCode::kMaxDepthExceeded: return "MaxDepthExceeded";
    case ErrorCode::kNoRootInStep: return "NoRootInStep";
    case ErrorCode::kUnsupportedForTable: return "UnsupportedForTable";
    case ErrorCode::kBlowUp: return "BlowUp";
    case ErrorCode::kStiffStep: return "StiffStep";
    case ErrorCode::kScenarioOutOfRange: return "ScenarioOutOfRange";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kUnknownCostFamily: return "UnknownCostFamily";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

bool is_convergence_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBracketingFailed:
    case ErrorCode::kNoConvergence:
    case ErrorCode::kNoConsistentTau:
    case ErrorCode::kMaxDepthExceeded:
    case ErrorCode::kNoRootInStep:
    case ErrorCode::kBlowUp:
    case ErrorCode::kStiffStep:
      return true;
    default:
      return false;
  }
}

}  // namespace oscc
