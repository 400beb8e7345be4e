// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INML_ERROR_H_
#define INML_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace inml {

enum class ErrorCode {
  kInvalidInput,
  kInvalidOrder,
  kLengthMismatch,
  // Model and table-entry text formats.
  kSyntax,
  kDimensionMismatch,
  kDuplicateEntry,
  kUnknownActivation,
  kWeightSaturation,
  kIllConditioned,
  kMalformedTables,
  kUnknownKey,
  // Wire codec.
  kTruncatedHeader,
  kTruncatedFeatures,
  kMalformedScale,
  kMalformedHeader,
  kBadMagic,
  kBadVersion,
  kTruncatedFrame,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// All recoverable failures in the library are reported with this type. The
// line number is set for errors raised while parsing a text format.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what, int line = 0);

  ErrorCode code() const { return code_; }
  int line() const { return line_; }
  // The message without the code/line prefix that what() carries.
  const std::string &message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
  int line_;
};

}  // namespace inml

#endif  // INML_ERROR_H_
