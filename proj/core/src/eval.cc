// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include "inml/eval.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "inml/control_plane.h"
#include "inml/error.h"
#include "inml/pipeline.h"
#include "inml/table_entries.h"
#include "inml/text_util.h"

namespace inml {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  // Rejection sampling for an unbiased draw.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return lo + static_cast<std::int64_t>(v % span);
}

double normalized_mse(std::span<const double> predictions,
                      std::span<const double> targets) {
  if (predictions.size() != targets.size() || targets.empty()) {
    throw Error(ErrorCode::kLengthMismatch,
                "normalized mse needs equal, nonempty vectors");
  }
  const auto n = static_cast<double>(targets.size());
  double mean = 0.0;
  for (double t : targets) mean += t;
  mean /= n;
  double var = 0.0;
  for (double t : targets) var += (t - mean) * (t - mean);
  var /= n;
  if (!(var > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "targets have zero variance");
  }
  double mse = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double d = predictions[i] - targets[i];
    mse += d * d;
  }
  return (mse / n) / var;
}

std::vector<PacketFrame> gen_traffic(const ModelSpec &model, std::size_t n,
                                     std::uint64_t seed, double lo, double hi,
                                     std::size_t payload_bytes) {
  if (n == 0) throw Error(ErrorCode::kInvalidInput, "traffic count must be at least 1");
  if (!(lo < hi)) throw Error(ErrorCode::kInvalidInput, "traffic range needs lo < hi");
  model.validate();
  const FixedPointFormat fmt(model.scale_bits);
  Rng rng(seed);
  std::vector<PacketFrame> frames;
  frames.reserve(n);
  for (std::size_t p = 0; p < n; ++p) {
    InferenceRequest request;
    request.model_id = model.model_id;
    request.output_cnt = static_cast<std::uint8_t>(model.output_width());
    request.scale = static_cast<std::uint16_t>(model.scale_bits);
    request.flags = payload_bytes > 0 ? kFlagPadded : 0;
    for (int i = 0; i < model.input_width(); ++i) {
      request.features.push_back(encode(rng.uniform(lo, hi), fmt).value);
    }
    PacketFrame frame = encode_header(request);
    frame.resize(frame.size() + payload_bytes, 0);
    frames.push_back(std::move(frame));
  }
  return frames;
}

namespace {

LayerSpec make_layer(int in, int out, std::vector<double> weights,
                     std::vector<double> biases, Activation act) {
  LayerSpec layer;
  layer.in_width = in;
  layer.out_width = out;
  layer.weights = std::move(weights);
  layer.biases = std::move(biases);
  layer.activation = act;
  return layer;
}

// Features through the packet pipeline at the model's scale; returns the
// decoded outputs flattened row-major.
std::vector<double> pipeline_outputs(const ModelSpec &model, const Dataset &data) {
  const FixedPointFormat fmt(model.scale_bits);
  ControlPlane control;
  control.load_tables(quantize_model(model, fmt));

  std::vector<PacketFrame> frames;
  frames.reserve(data.size());
  for (std::size_t r = 0; r < data.size(); ++r) {
    InferenceRequest request;
    request.model_id = model.model_id;
    request.output_cnt = static_cast<std::uint8_t>(model.output_width());
    request.scale = static_cast<std::uint16_t>(model.scale_bits);
    for (double x : data.feature_row(r)) request.features.push_back(encode(x, fmt).value);
    frames.push_back(encode_header(request));
  }
  const StreamResult stream = process_stream(frames, control);
  if (stream.stats.packets_out != data.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "pipeline dropped " + std::to_string(data.size() - stream.stats.packets_out) +
                    " of " + std::to_string(data.size()) + " evaluation packets");
  }
  std::vector<double> out;
  out.reserve(data.size() * model.output_width());
  for (const PacketFrame &frame : stream.frames) {
    const DecodedFrame decoded = decode_header(frame);
    for (QValue q : std::get<InferenceResult>(decoded.header).outputs) {
      out.push_back(decode(q, fmt));
    }
  }
  return out;
}

std::vector<double> float_outputs(const ModelSpec &model, const Dataset &data) {
  std::vector<double> out;
  out.reserve(data.size() * model.output_width());
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto y = float_inference(model, data.feature_row(r));
    out.insert(out.end(), y.begin(), y.end());
  }
  return out;
}

void check_dataset(const ModelSpec &model, const Dataset &data) {
  if (data.size() == 0) throw Error(ErrorCode::kInvalidInput, "dataset is empty");
  if (data.num_features != model.input_width()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dataset has " + std::to_string(data.num_features) +
                    " features, model expects " + std::to_string(model.input_width()));
  }
}

}  // namespace

ModelSpec linear_reference_model() {
  ModelSpec model;
  model.model_id = 1;
  model.scale_bits = 16;
  model.layers.push_back(make_layer(4, 1, {0.8, -0.5, 0.3, 0.6}, {0.1},
                                    Activation::linear()));
  return model;
}

ModelSpec sigmoid_reference_model(TaylorOrder order) {
  ModelSpec model;
  model.model_id = 2;
  model.scale_bits = 16;
  // Each hidden row has sum|w| + |b| <= 1, so |pre-activation| <= 1.
  model.layers.push_back(make_layer(4, 4,
                                    {0.30, -0.20, 0.25, -0.15,   //
                                     -0.35, 0.10, 0.20, 0.30,    //
                                     0.15, 0.40, -0.25, 0.10,    //
                                     -0.20, -0.30, 0.15, 0.25},  //
                                    {0.05, -0.05, 0.10, 0.0},
                                    Activation::sigmoid(order)));
  model.layers.push_back(make_layer(4, 1, {1.5, -1.0, 2.0, -0.8}, {0.2},
                                    Activation::linear()));
  return model;
}

Dataset synthetic_dataset(const ModelSpec &reference, std::size_t n,
                          std::uint64_t seed, double noise_sigma) {
  reference.validate();
  Rng rng(seed);
  Dataset data;
  data.num_features = reference.input_width();
  data.num_targets = reference.output_width();
  data.features.reserve(n * data.num_features);
  data.targets.reserve(n * data.num_targets);
  std::vector<double> x(data.num_features);
  for (std::size_t r = 0; r < n; ++r) {
    for (double &v : x) v = rng.uniform(-1.0, 1.0);
    data.features.insert(data.features.end(), x.begin(), x.end());
    for (double y : float_inference(reference, x)) {
      data.targets.push_back(y + noise_sigma * rng.normal());
    }
  }
  return data;
}

std::vector<MseRow> eval_mse_vs_fracbits(const ModelSpec &model, const Dataset &data,
                                         std::span<const int> bits, std::uint64_t seed) {
  check_dataset(model, data);
  for (int s : bits) {
    if (s < 1 || s > kMaxScaleBits) {
      throw Error(ErrorCode::kInvalidInput,
                  "fractional bits " + std::to_string(s) + " outside [1, 30]");
    }
  }
  const std::vector<double> reference = float_outputs(model, data);
  std::vector<MseRow> rows;
  for (int s : bits) {
    ModelSpec at_scale = model;
    at_scale.scale_bits = s;
    const auto predicted = pipeline_outputs(at_scale, data);
    rows.push_back({s, normalized_mse(predicted, reference), data.size(), seed});
  }
  return rows;
}

std::vector<MseRow> eval_mse_vs_order(const ModelSpec &model, const Dataset &data,
                                      std::span<const int> orders, int scale_bits,
                                      std::uint64_t seed) {
  check_dataset(model, data);
  const bool has_sigmoid = std::any_of(
      model.layers.begin(), model.layers.end(),
      [](const LayerSpec &l) { return l.activation.kind == Activation::Kind::kSigmoid; });
  if (!has_sigmoid) {
    throw Error(ErrorCode::kInvalidInput, "model has no sigmoid layer");
  }
  std::vector<TaylorOrder> parsed;
  for (int n : orders) parsed.push_back(taylor_order_from_int(n));

  const std::vector<double> reference = float_outputs(model, data);
  std::vector<MseRow> rows;
  for (TaylorOrder order : parsed) {
    ModelSpec variant = model;
    variant.scale_bits = scale_bits;
    for (LayerSpec &layer : variant.layers) {
      if (layer.activation.kind == Activation::Kind::kSigmoid) layer.activation.order = order;
    }
    const auto predicted = pipeline_outputs(variant, data);
    rows.push_back({to_int(order), normalized_mse(predicted, reference), data.size(), seed});
  }
  return rows;
}

double goodput_bps(const ThroughputParams &params, std::uint64_t overhead_bits) {
  const double overhead_bytes = static_cast<double>((overhead_bits + 7) / 8);
  return params.line_rate_bps * params.payload_bytes /
         (params.payload_bytes + params.fixed_header_bytes + overhead_bytes);
}

std::vector<ThroughputRow> eval_throughput_overhead(const ThroughputParams &params,
                                                    std::span<const std::uint64_t> overheads,
                                                    std::size_t measure_packets) {
  if (!(params.line_rate_bps > 0.0) || !(params.payload_bytes > 0.0) ||
      !(params.fixed_header_bytes > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "throughput parameters must be positive");
  }
  std::vector<ThroughputRow> rows;
  for (std::uint64_t h : overheads) {
    ThroughputRow row;
    row.overhead_bits = h;
    row.throughput_gbps = goodput_bps(params, h) / 1e9;

    const std::uint64_t features = std::min<std::uint64_t>(h / 32, kMaxLayerWidth);
    if (measure_packets > 0 && features > 0) {
      const int width = static_cast<int>(features);
      ModelSpec model;
      model.model_id = 7;
      model.scale_bits = 16;
      model.layers.push_back(make_layer(width, 1, std::vector<double>(width, 1.0 / width),
                                        {0.0}, Activation::linear()));
      // Overhead beyond the widest model travels as opaque bytes.
      const std::size_t extra = (h + 7) / 8 - features * kValueBytes;
      const auto frames = gen_traffic(model, measure_packets, kDefaultSeed, -1.0, 1.0,
                                      static_cast<std::size_t>(params.payload_bytes) + extra);
      ControlPlane control;
      control.load_tables(quantize_model(model, FixedPointFormat(16)));
      const auto start = std::chrono::steady_clock::now();
      const StreamResult result = process_stream(frames, control);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      if (result.stats.packets_out == measure_packets && elapsed.count() > 0.0) {
        row.sim_pkts_per_sec = static_cast<double>(measure_packets) / elapsed.count();
      }
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string render_mse_csv(std::string_view first_column, std::span<const MseRow> rows) {
  std::ostringstream out;
  out << first_column << ",normalized_mse,n,seed\n";
  for (const MseRow &r : rows) {
    out << r.parameter << "," << format_double(r.normalized_mse) << "," << r.samples
        << "," << r.seed << "\n";
  }
  return out.str();
}

}  // namespace

std::string render_fracbits_csv(std::span<const MseRow> rows) {
  return render_mse_csv("frac_bits", rows);
}

std::string render_order_csv(std::span<const MseRow> rows) {
  return render_mse_csv("taylor_order", rows);
}

std::string render_throughput_csv(std::span<const ThroughputRow> rows) {
  std::ostringstream out;
  out << "overhead_bits,throughput_gbps,sim_pkts_per_sec\n";
  for (const ThroughputRow &r : rows) {
    out << r.overhead_bits << "," << format_double(r.throughput_gbps) << ",";
    if (r.sim_pkts_per_sec) out << format_double(std::round(*r.sim_pkts_per_sec));
    out << "\n";
  }
  return out.str();
}

}  // namespace inml
