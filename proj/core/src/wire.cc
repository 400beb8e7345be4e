// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include "inml/wire.h"

#include <algorithm>
#include <array>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

#include "inml/error.h"

namespace inml {

namespace {

constexpr std::array<char, 4> kMagic = {'I', 'N', 'M', 'L'};

void put_u16(PacketFrame &out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(PacketFrame &out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint16_t get_u16(const std::uint8_t *p) {
  return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}

std::uint32_t get_u32(const std::uint8_t *p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

PacketFrame encode_common(std::uint16_t model_id, std::uint8_t fcnt,
                          std::uint8_t ocnt, std::uint16_t scale,
                          std::uint8_t flags, const std::vector<QValue> &values) {
  if (scale > kMaxScaleBits) {
    throw Error(ErrorCode::kInvalidInput, "scale " + std::to_string(scale) + " > 30");
  }
  if ((flags & kFlagReservedMask) != 0) {
    throw Error(ErrorCode::kInvalidInput, "reserved flag bits must be zero");
  }
  PacketFrame out;
  out.reserve(kFixedHeaderBytes + kValueBytes * values.size());
  put_u16(out, model_id);
  out.push_back(fcnt);
  out.push_back(ocnt);
  put_u16(out, scale);
  out.push_back(flags);
  for (QValue v : values) put_u32(out, static_cast<std::uint32_t>(v.raw));
  return out;
}

}  // namespace

PacketFrame encode_header(const InferenceRequest &request) {
  if (request.features.empty() || request.features.size() > 255) {
    throw Error(ErrorCode::kInvalidInput, "request needs 1..255 features");
  }
  if ((request.flags & kFlagResponse) != 0) {
    throw Error(ErrorCode::kInvalidInput, "request must not carry the RESPONSE flag");
  }
  return encode_common(request.model_id,
                       static_cast<std::uint8_t>(request.features.size()),
                       request.output_cnt, request.scale, request.flags,
                       request.features);
}

PacketFrame encode_header(const InferenceResult &result) {
  if (result.outputs.size() > 255) {
    throw Error(ErrorCode::kInvalidInput, "result carries at most 255 outputs");
  }
  if ((result.flags & kFlagResponse) == 0) {
    throw Error(ErrorCode::kInvalidInput, "result must carry the RESPONSE flag");
  }
  return encode_common(result.model_id, 0,
                       static_cast<std::uint8_t>(result.outputs.size()),
                       result.scale, result.flags, result.outputs);
}

DecodedFrame decode_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFixedHeaderBytes) {
    throw Error(ErrorCode::kTruncatedHeader,
                std::to_string(bytes.size()) + " bytes, header needs 7");
  }
  const std::uint8_t *p = bytes.data();
  const std::uint16_t model_id = get_u16(p);
  const std::uint8_t fcnt = p[2];
  const std::uint8_t ocnt = p[3];
  const std::uint16_t scale = get_u16(p + 4);
  const std::uint8_t flags = p[6];

  if (scale > kMaxScaleBits) {
    throw Error(ErrorCode::kMalformedScale, "scale " + std::to_string(scale) + " > 30");
  }
  if ((flags & kFlagReservedMask) != 0) {
    throw Error(ErrorCode::kMalformedHeader, "reserved flag bits set");
  }
  const bool response = (flags & kFlagResponse) != 0;
  if (response && fcnt != 0) {
    throw Error(ErrorCode::kMalformedHeader, "result header with nonzero feature count");
  }
  if (!response && fcnt == 0) {
    throw Error(ErrorCode::kMalformedHeader, "request header with zero features");
  }

  const std::size_t count = response ? ocnt : fcnt;
  const std::size_t needed = kFixedHeaderBytes + kValueBytes * count;
  if (bytes.size() < needed) {
    throw Error(ErrorCode::kTruncatedFeatures,
                "header declares " + std::to_string(count) + " values but only " +
                    std::to_string((bytes.size() - kFixedHeaderBytes) / kValueBytes) +
                    " are present");
  }
  std::vector<QValue> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i].raw = static_cast<std::int32_t>(get_u32(p + kFixedHeaderBytes + kValueBytes * i));
  }

  DecodedFrame out;
  out.payload = bytes.subspan(needed);
  if (response) {
    out.header = InferenceResult{model_id, scale, flags, std::move(values)};
  } else {
    out.header = InferenceRequest{model_id, ocnt, scale, flags, std::move(values)};
  }
  return out;
}

void write_frames(std::ostream &out, std::span<const PacketFrame> frames) {
  out.write(kMagic.data(), kMagic.size());
  out.put(static_cast<char>(kFrameFileVersion));
  for (const PacketFrame &frame : frames) {
    PacketFrame len;
    put_u32(len, static_cast<std::uint32_t>(frame.size()));
    out.write(reinterpret_cast<const char *>(len.data()), 4);
    out.write(reinterpret_cast<const char *>(frame.data()),
              static_cast<std::streamsize>(frame.size()));
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing frame stream");
}

std::vector<PacketFrame> read_frames(std::istream &in) {
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  if (bytes.size() < kMagic.size() ||
      !std::equal(kMagic.begin(), kMagic.end(), bytes.begin(),
                  [](char a, std::uint8_t b) { return static_cast<std::uint8_t>(a) == b; })) {
    throw Error(ErrorCode::kBadMagic, "frame file does not start with INML");
  }
  if (bytes.size() < 5) throw Error(ErrorCode::kBadVersion, "missing version byte");
  if (bytes[4] != kFrameFileVersion) {
    throw Error(ErrorCode::kBadVersion,
                "unsupported frame file version " + std::to_string(bytes[4]));
  }
  std::vector<PacketFrame> frames;
  std::size_t pos = 5;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 4) {
      throw Error(ErrorCode::kTruncatedFrame,
                  "frame " + std::to_string(frames.size()) + ": truncated length");
    }
    const std::size_t len = get_u32(bytes.data() + pos);
    pos += 4;
    if (bytes.size() - pos < len) {
      throw Error(ErrorCode::kTruncatedFrame,
                  "frame " + std::to_string(frames.size()) + ": declares " +
                      std::to_string(len) + " bytes, " +
                      std::to_string(bytes.size() - pos) + " remain");
    }
    frames.emplace_back(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                        bytes.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  return frames;
}

}  // namespace inml
