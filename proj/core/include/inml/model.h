// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INML_MODEL_H_
#define INML_MODEL_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inml/approx.h"

namespace inml {

// One dense layer: outputs[n] = act(biases[n] + sum_i weights[n][i] * x[i]).
struct LayerSpec {
  int in_width = 0;
  int out_width = 0;
  std::vector<double> weights;  // row-major, out_width x in_width
  std::vector<double> biases;   // out_width
  Activation activation;

  double weight(int neuron, int input) const {
    return weights[static_cast<std::size_t>(neuron) * in_width + input];
  }
  double &weight(int neuron, int input) {
    return weights[static_cast<std::size_t>(neuron) * in_width + input];
  }

  friend bool operator==(const LayerSpec &, const LayerSpec &) = default;
};

struct ModelSpec {
  std::uint16_t model_id = 0;
  int scale_bits = 16;
  std::vector<LayerSpec> layers;

  int input_width() const { return layers.front().in_width; }
  int output_width() const { return layers.back().out_width; }

  // Structural checks: at least one layer, chained widths, matrix sizes,
  // finite parameters, scale in range. Throws Error.
  void validate() const;

  friend bool operator==(const ModelSpec &, const ModelSpec &) = default;
};

// Line-oriented model format:
//   model <id> scale=<s>
//   layer <idx> in=<n> out=<m> act=<linear|relu|leaky:<a>|sigmoid:<1|3|5>>
//   w <neuron> <input> <float>
//   b <neuron> <float>
// '#' starts a comment. Every weight and bias of a layer must be given once.
ModelSpec parse_model(std::string_view text);
ModelSpec parse_model(std::istream &in);
std::string render_model(const ModelSpec &model);

// Float evaluation of the model with the true logistic sigmoid.
std::vector<double> float_inference(const ModelSpec &model,
                                    std::span<const double> input);

// Samples with named columns x0..xk then y0..ym.
struct Dataset {
  int num_features = 0;
  int num_targets = 0;
  std::vector<double> features;  // row-major, size() x num_features
  std::vector<double> targets;   // row-major, size() x num_targets

  std::size_t size() const {
    return num_features == 0 ? 0 : features.size() / num_features;
  }
  std::span<const double> feature_row(std::size_t i) const {
    return {features.data() + i * num_features,
            static_cast<std::size_t>(num_features)};
  }
  std::span<const double> target_row(std::size_t i) const {
    return {targets.data() + i * num_targets,
            static_cast<std::size_t>(num_targets)};
  }
};

Dataset parse_dataset(std::string_view csv);
std::string render_dataset(const Dataset &data);

struct FitOptions {
  double ridge = 0.0;
  std::uint16_t model_id = 1;
  int scale_bits = 16;
};

// Closed-form least squares with an L2 penalty on the weights (the bias is
// not penalized). Produces a single linear layer. Throws
// Error(kIllConditioned) when the normal equations are singular.
ModelSpec fit_linear(const Dataset &data, const FitOptions &options);

}  // namespace inml

#endif  // INML_MODEL_H_
