#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hcal {

enum class ErrorKind {
  // malformed or unreadable inputs
  Format,
  Checksum,
  Io,
  // inputs that violate an operation's contract
  DimensionMismatch,
  KindMismatch,
  SpaceMismatch,
  ZeroVector,
  GridMismatch,
  Range,
  Spec,
  Rank,
  UnfittedModel,
  UnsupportedMethod,
  LabelMismatch,
  InvalidArgument,
  // not enough data to do what was asked
  Size,
  EmptyClass,
  InsufficientClass,
  EmptyEstimationSet,
  TooFewAnchors,
  TooFewSamples,
  MissingLabel,
  SingleClass,
  SingletonClass,
};

/// Coarse grouping used for C status codes and CLI exit codes.
enum class ErrorCategory { Format = 2, Precondition = 3, InsufficientData = 4 };

std::string_view error_kind_name(ErrorKind kind) noexcept;
ErrorCategory error_category(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return error_category(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace hcal
