// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INML_EVAL_H_
#define INML_EVAL_H_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "inml/approx.h"
#include "inml/model.h"
#include "inml/wire.h"

namespace inml {

// Seeded generator with a platform-independent output sequence. The
// std:: distributions are implementation-defined, so variates are derived
// from the raw mt19937_64 stream directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal (Box-Muller).
  double normal();
  // Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

// mean((p - t)^2) / var(t), population variance. Throws Error with
// kLengthMismatch for unequal or empty inputs and kInvalidInput when the
// targets have zero variance.
double normalized_mse(std::span<const double> predictions,
                      std::span<const double> targets);

// n request frames with features drawn uniformly from [lo, hi] and encoded
// at the model scale, optionally followed by `payload_bytes` zero bytes.
std::vector<PacketFrame> gen_traffic(const ModelSpec &model, std::size_t n,
                                     std::uint64_t seed, double lo, double hi,
                                     std::size_t payload_bytes = 0);

// Benchmark models. The linear reference has 4 inputs and 1 output. The
// sigmoid reference has a 4-wide sigmoid hidden layer whose pre-activations
// stay inside [-1, 1] for inputs in [-1, 1], followed by a linear output.
ModelSpec linear_reference_model();
ModelSpec sigmoid_reference_model(TaylorOrder order = TaylorOrder::kCubic);

// Features uniform in [-1, 1]; targets are the reference model's float
// outputs plus N(0, noise_sigma^2) noise.
Dataset synthetic_dataset(const ModelSpec &reference, std::size_t n,
                          std::uint64_t seed, double noise_sigma = 0.01);

inline constexpr std::size_t kBenchmarkSamples = 1000;

struct MseRow {
  int parameter = 0;  // fractional bits or Taylor order
  double normalized_mse = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// Quantizes the model at each s, runs the dataset features through the
// packet pipeline and scores the decoded outputs against the float model's
// outputs on the same features. Rows follow the order of `bits`.
std::vector<MseRow> eval_mse_vs_fracbits(const ModelSpec &model, const Dataset &data,
                                         std::span<const int> bits, std::uint64_t seed);

// Same, with every sigmoid layer switched to each Taylor order in turn and the
// float model using the true sigmoid. Throws Error(kInvalidInput) when the
// model has no sigmoid layer.
std::vector<MseRow> eval_mse_vs_order(const ModelSpec &model, const Dataset &data,
                                      std::span<const int> orders, int scale_bits,
                                      std::uint64_t seed);

struct ThroughputParams {
  double line_rate_bps = 100e9;
  double payload_bytes = 1500.0;
  double fixed_header_bytes = 7.0;
};

// line_rate * P / (P + fixed_header + ceil(h / 8)), in bits per second.
double goodput_bps(const ThroughputParams &params, std::uint64_t overhead_bits);

struct ThroughputRow {
  std::uint64_t overhead_bits = 0;
  double throughput_gbps = 0.0;
  std::optional<double> sim_pkts_per_sec;  // only when measured
};

// Analytical goodput per overhead. With `measure_packets` > 0, also times the
// software pipeline on that many packets whose feature block is
// overhead_bits wide (relative numbers only; not deterministic).
std::vector<ThroughputRow> eval_throughput_overhead(const ThroughputParams &params,
                                                    std::span<const std::uint64_t> overheads,
                                                    std::size_t measure_packets = 0);

std::string render_fracbits_csv(std::span<const MseRow> rows);
std::string render_order_csv(std::span<const MseRow> rows);
std::string render_throughput_csv(std::span<const ThroughputRow> rows);

}  // namespace inml

#endif  // INML_EVAL_H_
