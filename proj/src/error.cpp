#include "hcal/error.hpp"

namespace hcal {

std::string_view error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Format: return "FormatError";
    case ErrorKind::Checksum: return "ChecksumError";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::KindMismatch: return "KindMismatch";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::Range: return "RangeError";
    case ErrorKind::Spec: return "SpecError";
    case ErrorKind::Rank: return "RankError";
    case ErrorKind::UnfittedModel: return "UnfittedModel";
    case ErrorKind::UnsupportedMethod: return "UnsupportedMethod";
    case ErrorKind::LabelMismatch: return "LabelMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Size: return "SizeError";
    case ErrorKind::EmptyClass: return "EmptyClassError";
    case ErrorKind::InsufficientClass: return "InsufficientClassError";
    case ErrorKind::EmptyEstimationSet: return "EmptyEstimationSet";
    case ErrorKind::TooFewAnchors: return "TooFewAnchors";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::MissingLabel: return "MissingLabel";
    case ErrorKind::SingleClass: return "SingleClassError";
    case ErrorKind::SingletonClass: return "SingletonClassError";
  }
  return "Error";
}

ErrorCategory error_category(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Format:
    case ErrorKind::Checksum:
    case ErrorKind::Io:
      return ErrorCategory::Format;
    case ErrorKind::Size:
    case ErrorKind::EmptyClass:
    case ErrorKind::InsufficientClass:
    case ErrorKind::EmptyEstimationSet:
    case ErrorKind::TooFewAnchors:
    case ErrorKind::TooFewSamples:
    case ErrorKind::MissingLabel:
    case ErrorKind::SingleClass:
    case ErrorKind::SingletonClass:
      return ErrorCategory::InsufficientData;
    default:
      return ErrorCategory::Precondition;
  }
}

}  // namespace hcal
