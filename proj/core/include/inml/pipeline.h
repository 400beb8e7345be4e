// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INML_PIPELINE_H_
#define INML_PIPELINE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "inml/control_plane.h"
#include "inml/op_trace.h"
#include "inml/wire.h"

namespace inml {

enum class PacketOutcome {
  kForwarded,
  kParseError,
  kLookupMiss,
  kFeatureMismatch,
  kScaleMismatch,
};

std::string_view outcome_name(PacketOutcome outcome);

struct PacketResult {
  PacketOutcome outcome = PacketOutcome::kParseError;
  PacketFrame frame;          // the result packet when forwarded
  std::uint64_t epoch = 0;    // snapshot the packet executed against
  bool saturated = false;
  bool clamped = false;
};

// Runs one packet against one snapshot: parse the request, look up the model,
// check feature count and scale, then per layer and neuron accumulate the
// weighted inputs in a 64-bit accumulator, rescale once, add the bias and
// apply the activation. The request header is replaced by a result header;
// any trailing payload is copied through unchanged. Malformed packets are
// reported in the outcome, never thrown.
PacketResult process_packet(std::span<const std::uint8_t> frame,
                            const Snapshot &snapshot, OpTrace *trace = nullptr);

struct PipelineStats {
  std::uint64_t packets_in = 0;
  std::uint64_t packets_out = 0;
  std::uint64_t parse_errors = 0;
  std::uint64_t lookup_misses = 0;
  std::uint64_t feature_mismatches = 0;
  std::uint64_t scale_mismatches = 0;
  std::uint64_t saturation_events = 0;  // forwarded packets with SATURATED
  std::uint64_t clamp_events = 0;       // forwarded packets with CLAMPED
  OpCounts op_counts{};                 // filled when tracing

  std::uint64_t mismatch_drops() const { return feature_mismatches + scale_mismatches; }
  bool conserved() const {
    return packets_out + parse_errors + lookup_misses + mismatch_drops() == packets_in;
  }
  void count(const PacketResult &result);

  // "key=value" lines.
  std::string to_key_value() const;
  // Header row plus one data row.
  std::string to_csv() const;
};

struct StreamResult {
  std::vector<PacketFrame> frames;    // forwarded packets, input order
  std::vector<std::uint64_t> epochs;  // epoch used by each forwarded packet
  PipelineStats stats;
};

// Each packet takes the then-current snapshot when it starts.
StreamResult process_stream(std::span<const PacketFrame> frames,
                            const ControlPlane &control, bool trace = false);

// The exact primitive-operation sequence process_packet executes for this
// frame. Throws Error when the packet would be dropped.
OpTrace op_trace(std::span<const std::uint8_t> frame, const ControlPlane &control);

}  // namespace inml

#endif  // INML_PIPELINE_H_
