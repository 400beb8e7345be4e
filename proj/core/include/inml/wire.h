// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INML_WIRE_H_
#define INML_WIRE_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "inml/fixed_point.h"

namespace inml {

// Encapsulation header, network byte order:
//
//   0      2      3      4      6      7
//   +------+------+------+------+------+-----------------------+
//   | model| fcnt | ocnt | scale| flags| fcnt (or ocnt) x i32  |
//   +------+------+------+------+------+-----------------------+
//
// A result reuses the layout with fcnt = 0, the RESPONSE flag set and ocnt
// output words. Bytes after the value block are opaque payload.
inline constexpr std::size_t kFixedHeaderBytes = 7;
inline constexpr std::size_t kValueBytes = 4;

inline constexpr std::uint8_t kFlagResponse = 0x01;
inline constexpr std::uint8_t kFlagSaturated = 0x02;
inline constexpr std::uint8_t kFlagClamped = 0x04;
inline constexpr std::uint8_t kFlagPadded = 0x08;
inline constexpr std::uint8_t kFlagReservedMask = 0xF0;

struct InferenceRequest {
  std::uint16_t model_id = 0;
  std::uint8_t output_cnt = 0;
  std::uint16_t scale = 0;  // the shift count s, not 2^s
  std::uint8_t flags = 0;
  std::vector<QValue> features;  // feature_cnt == features.size()

  friend bool operator==(const InferenceRequest &, const InferenceRequest &) = default;
};

struct InferenceResult {
  std::uint16_t model_id = 0;
  std::uint16_t scale = 0;
  std::uint8_t flags = kFlagResponse;
  std::vector<QValue> outputs;  // output_cnt == outputs.size()

  friend bool operator==(const InferenceResult &, const InferenceResult &) = default;
};

using PacketFrame = std::vector<std::uint8_t>;

// Precondition violations (empty or >255 features, scale > 30, RESPONSE set
// on a request, reserved flag bits) throw Error(kInvalidInput).
PacketFrame encode_header(const InferenceRequest &request);
PacketFrame encode_header(const InferenceResult &result);

struct DecodedFrame {
  std::variant<InferenceRequest, InferenceResult> header;
  // View into the decoded buffer; valid while that buffer is.
  std::span<const std::uint8_t> payload;
};

// Throws Error with kTruncatedHeader, kMalformedScale, kMalformedHeader or
// kTruncatedFeatures. Never reads past the declared counts.
DecodedFrame decode_header(std::span<const std::uint8_t> bytes);

// Frame file: "INML" | 0x01 | { u32be length | bytes }*.
inline constexpr std::uint8_t kFrameFileVersion = 0x01;

void write_frames(std::ostream &out, std::span<const PacketFrame> frames);
// Throws Error with kBadMagic, kBadVersion or kTruncatedFrame.
std::vector<PacketFrame> read_frames(std::istream &in);

}  // namespace inml

#endif  // INML_WIRE_H_
