#pragma once

#include <stdexcept>
#include <string>

namespace lungrad {

enum class ErrorCode {
  UnsupportedFormat,
  CorruptHeader,
  NonFiniteData,
  LabelOutOfRange,
  NonIntegralData,
  DimsMismatch,
  SpacingMismatch,
  FrameMismatch,
  EmptyMask,
  NonPositiveBinWidth,
  InvalidSigma,
  MissingLabelColumn,
  RangeViolation,
  DuplicateSubjectId,
  AllMissingColumn,
  SingleClass,
  MissingValues,
  DimensionMismatch,
  ClassTooSmall,
  TooFewValues,
  LengthMismatch,
  NoSharedFeatures,
  InvalidSpec,
  InvalidConfig,
  IoFailure,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying a machine-checkable code plus a human message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lungrad
