#include "lungrad/error.hpp"

namespace lungrad {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptHeader: return "CorruptHeader";
    case ErrorCode::NonFiniteData: return "NonFiniteData";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::NonIntegralData: return "NonIntegralData";
    case ErrorCode::DimsMismatch: return "DimsMismatch";
    case ErrorCode::SpacingMismatch: return "SpacingMismatch";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::NonPositiveBinWidth: return "NonPositiveBinWidth";
    case ErrorCode::InvalidSigma: return "InvalidSigma";
    case ErrorCode::MissingLabelColumn: return "MissingLabelColumn";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::DuplicateSubjectId: return "DuplicateSubjectId";
    case ErrorCode::AllMissingColumn: return "AllMissingColumn";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::MissingValues: return "MissingValues";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::TooFewValues: return "TooFewValues";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NoSharedFeatures: return "NoSharedFeatures";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "UnknownError";
}

}  // namespace lungrad
