#include "testrisk/error.hpp"

namespace testrisk {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidSize: return "invalid-size";
    case ErrorCode::kInvalidParams: return "invalid-params";
    case ErrorCode::kDreOutOfRange: return "dre-out-of-range";
    case ErrorCode::kInvalidPlan: return "invalid-plan";
    case ErrorCode::kValidationError: return "validation-error";
    case ErrorCode::kMonotonicityViolation: return "monotonicity-violation";
    case ErrorCode::kDuplicateName: return "duplicate-name";
    case ErrorCode::kNoDefects: return "no-defects";
    case ErrorCode::kUnknownPhase: return "unknown-phase";
    case ErrorCode::kEmptyHistory: return "empty-history";
    case ErrorCode::kNoUsableHistory: return "no-usable-history";
    case ErrorCode::kZeroRate: return "zero-rate";
    case ErrorCode::kZeroConstraint: return "zero-constraint";
    case ErrorCode::kInvalidProfile: return "invalid-profile";
    case ErrorCode::kBadOverridePath: return "bad-override-path";
    case ErrorCode::kInvariantViolation: return "invariant-violation";
    case ErrorCode::kMismatchedLadders: return "mismatched-ladders";
    case ErrorCode::kParseError: return "parse-error";
    case ErrorCode::kSchemaError: return "schema-error";
    case ErrorCode::kNegativeCount: return "negative-count";
    case ErrorCode::kDuplicate: return "duplicate";
  }
  return "unknown";
}

}  // namespace testrisk
