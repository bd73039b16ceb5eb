#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace testrisk {

enum class ErrorCode {
  kInvalidSize,
  kInvalidParams,
  kDreOutOfRange,
  kInvalidPlan,
  kValidationError,
  kMonotonicityViolation,
  kDuplicateName,
  kNoDefects,
  kUnknownPhase,
  kEmptyHistory,
  kNoUsableHistory,
  kZeroRate,
  kZeroConstraint,
  kInvalidProfile,
  kBadOverridePath,
  kInvariantViolation,
  kMismatchedLadders,
  kParseError,
  kSchemaError,
  kNegativeCount,
  kDuplicate,
};

/// Stable kebab-case identifier, used verbatim in service error bodies.
std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `location` names where the problem
/// is (a field path, a row number, a line/column) and may be empty.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string location = {})
      : std::runtime_error(std::move(message)),
        code_(code),
        location_(std::move(location)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& location() const noexcept { return location_; }

 private:
  ErrorCode code_;
  std::string location_;
};

}  // namespace testrisk
