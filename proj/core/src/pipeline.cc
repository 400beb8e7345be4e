// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include "inml/pipeline.h"

#include <algorithm>
#include <array>
#include <sstream>

#include "inml/approx.h"
#include "inml/error.h"
#include "inml/traced_ops.h"

namespace inml {

namespace {

using Lane = std::array<QValue, kMaxLayerWidth>;

QValue activate(QValue z, const CompiledLayer &layer, FixedPointFormat fmt,
                ExecContext &ctx) {
  switch (layer.activation.kind) {
    case Activation::Kind::kLinear:
      return z;
    case Activation::Kind::kRelu:
      return relu(z, &ctx);
    case Activation::Kind::kLeakyRelu:
      return leaky_relu(z, layer.activation.alpha, fmt, &ctx);
    case Activation::Kind::kSigmoid:
      return sigmoid_taylor(z, *layer.sigmoid, ctx);
  }
  return z;
}

}  // namespace

std::string_view outcome_name(PacketOutcome outcome) {
  switch (outcome) {
    case PacketOutcome::kForwarded: return "forwarded";
    case PacketOutcome::kParseError: return "parse-error";
    case PacketOutcome::kLookupMiss: return "lookup-miss";
    case PacketOutcome::kFeatureMismatch: return "feature-mismatch";
    case PacketOutcome::kScaleMismatch: return "scale-mismatch";
  }
  return "?";
}

PacketResult process_packet(std::span<const std::uint8_t> frame,
                            const Snapshot &snapshot, OpTrace *trace) {
  PacketResult result;
  result.epoch = snapshot.epoch();

  DecodedFrame decoded;
  try {
    decoded = decode_header(frame);
  } catch (const Error &) {
    result.outcome = PacketOutcome::kParseError;
    return result;
  }
  const auto *request = std::get_if<InferenceRequest>(&decoded.header);
  if (request == nullptr) {
    // A result header arriving on the inference path is not a request.
    result.outcome = PacketOutcome::kParseError;
    return result;
  }

  ExecContext ctx;
  ctx.trace = trace;

  ctx.record(OpTag::kTableLookup);
  const CompiledModel *model = snapshot.find(request->model_id);
  if (model == nullptr) {
    result.outcome = PacketOutcome::kLookupMiss;
    return result;
  }
  ctx.record(OpTag::kCompare);
  if (static_cast<int>(request->features.size()) != model->metadata.widths.front()) {
    result.outcome = PacketOutcome::kFeatureMismatch;
    return result;
  }
  ctx.record(OpTag::kCompare);
  if (request->scale != model->fmt.scale_bits()) {
    result.outcome = PacketOutcome::kScaleMismatch;
    return result;
  }

  const FixedPointFormat fmt = model->fmt;
  const int s = fmt.scale_bits();
  Lane in{};
  Lane out{};
  std::copy(request->features.begin(), request->features.end(), in.begin());

  for (const CompiledLayer &layer : model->layers) {
    for (int n = 0; n < layer.out_width; ++n) {
      std::int64_t acc = 0;
      for (int i = 0; i < layer.in_width; ++i) {
        const QValue w = ops::lookup(layer.weight(n, i), ctx);
        ctx.record(OpTag::kMul);
        ctx.record(OpTag::kAdd);
        acc = add_sat64(acc, static_cast<std::int64_t>(w.raw) * in[i].raw, ctx.saturated);
      }
      const QValue dot = ops::shift_round(acc, s, ctx);
      const QValue z = ops::add(ops::lookup(layer.biases[n], ctx), dot, ctx);
      out[n] = activate(z, layer, fmt, ctx);
    }
    std::swap(in, out);
  }

  InferenceResult response;
  response.model_id = request->model_id;
  response.scale = request->scale;
  response.flags = static_cast<std::uint8_t>(
      kFlagResponse | (request->flags & kFlagPadded) |
      (ctx.saturated ? kFlagSaturated : 0) | (ctx.clamped ? kFlagClamped : 0));
  const int width = model->metadata.widths.back();
  response.outputs.assign(in.begin(), in.begin() + width);

  result.frame = encode_header(response);
  result.frame.insert(result.frame.end(), decoded.payload.begin(), decoded.payload.end());
  result.outcome = PacketOutcome::kForwarded;
  result.saturated = ctx.saturated;
  result.clamped = ctx.clamped;
  return result;
}

void PipelineStats::count(const PacketResult &result) {
  ++packets_in;
  switch (result.outcome) {
    case PacketOutcome::kForwarded:
      ++packets_out;
      if (result.saturated) ++saturation_events;
      if (result.clamped) ++clamp_events;
      break;
    case PacketOutcome::kParseError: ++parse_errors; break;
    case PacketOutcome::kLookupMiss: ++lookup_misses; break;
    case PacketOutcome::kFeatureMismatch: ++feature_mismatches; break;
    case PacketOutcome::kScaleMismatch: ++scale_mismatches; break;
  }
}

std::string PipelineStats::to_key_value() const {
  std::ostringstream out;
  out << "packets_in=" << packets_in << "\n"
      << "packets_out=" << packets_out << "\n"
      << "parse_errors=" << parse_errors << "\n"
      << "lookup_misses=" << lookup_misses << "\n"
      << "feature_mismatches=" << feature_mismatches << "\n"
      << "scale_mismatches=" << scale_mismatches << "\n"
      << "saturation_events=" << saturation_events << "\n"
      << "clamp_events=" << clamp_events << "\n";
  for (std::size_t t = 0; t < kNumOpTags; ++t) {
    out << "op_" << op_tag_name(static_cast<OpTag>(t)) << "=" << op_counts[t] << "\n";
  }
  return out.str();
}

std::string PipelineStats::to_csv() const {
  std::ostringstream out;
  out << "packets_in,packets_out,parse_errors,lookup_misses,feature_mismatches,"
         "scale_mismatches,saturation_events,clamp_events";
  for (std::size_t t = 0; t < kNumOpTags; ++t) {
    out << ",op_" << op_tag_name(static_cast<OpTag>(t));
  }
  out << "\n"
      << packets_in << "," << packets_out << "," << parse_errors << ","
      << lookup_misses << "," << feature_mismatches << "," << scale_mismatches << ","
      << saturation_events << "," << clamp_events;
  for (std::size_t t = 0; t < kNumOpTags; ++t) out << "," << op_counts[t];
  out << "\n";
  return out.str();
}

StreamResult process_stream(std::span<const PacketFrame> frames,
                            const ControlPlane &control, bool trace) {
  StreamResult out;
  OpTrace packet_trace;
  for (const PacketFrame &frame : frames) {
    const auto snapshot = control.snapshot();
    packet_trace.clear();
    PacketResult r = process_packet(frame, *snapshot, trace ? &packet_trace : nullptr);
    out.stats.count(r);
    if (trace) {
      const OpCounts counts = count_ops(packet_trace);
      for (std::size_t t = 0; t < kNumOpTags; ++t) out.stats.op_counts[t] += counts[t];
    }
    if (r.outcome == PacketOutcome::kForwarded) {
      out.frames.push_back(std::move(r.frame));
      out.epochs.push_back(r.epoch);
    }
  }
  return out;
}

OpTrace op_trace(std::span<const std::uint8_t> frame, const ControlPlane &control) {
  OpTrace trace;
  const auto snapshot = control.snapshot();
  const PacketResult r = process_packet(frame, *snapshot, &trace);
  switch (r.outcome) {
    case PacketOutcome::kForwarded:
      return trace;
    case PacketOutcome::kParseError:
      decode_header(frame);  // rethrows the typed decode error
      throw Error(ErrorCode::kMalformedHeader, "packet is not an inference request");
    case PacketOutcome::kLookupMiss:
      throw Error(ErrorCode::kUnknownKey, "packet dropped: unknown model id");
    case PacketOutcome::kFeatureMismatch:
      throw Error(ErrorCode::kDimensionMismatch,
                  "packet dropped: feature count does not match the model");
    case PacketOutcome::kScaleMismatch:
      throw Error(ErrorCode::kMalformedScale,
                  "packet dropped: scale does not match the model");
  }
  return trace;
}

}  // namespace inml
