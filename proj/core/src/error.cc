// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include "inml/error.h"

namespace inml {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kInvalidOrder: return "invalid-order";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kSyntax: return "syntax";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kDuplicateEntry: return "duplicate-entry";
    case ErrorCode::kUnknownActivation: return "unknown-activation";
    case ErrorCode::kWeightSaturation: return "weight-saturation";
    case ErrorCode::kIllConditioned: return "ill-conditioned";
    case ErrorCode::kMalformedTables: return "malformed-tables";
    case ErrorCode::kUnknownKey: return "unknown-key";
    case ErrorCode::kTruncatedHeader: return "truncated-header";
    case ErrorCode::kTruncatedFeatures: return "truncated-features";
    case ErrorCode::kMalformedScale: return "malformed-scale";
    case ErrorCode::kMalformedHeader: return "malformed-header";
    case ErrorCode::kBadMagic: return "bad-magic";
    case ErrorCode::kBadVersion: return "bad-version";
    case ErrorCode::kTruncatedFrame: return "truncated-frame";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

namespace {

std::string format_what(ErrorCode code, const std::string &what, int line) {
  std::string out(error_code_name(code));
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  out += ": ";
  out += what;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string &what, int line)
    : std::runtime_error(format_what(code, what, line)),
      code_(code),
      message_(what),
      line_(line) {}

}  // namespace inml
