// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include "inml/model.h"

#include <cmath>
#include <istream>
#include <iterator>
#include <optional>
#include <sstream>

#include "inml/error.h"
#include "inml/fixed_point.h"
#include "inml/text_util.h"

namespace inml {

namespace {

[[noreturn]] void fail(ErrorCode code, int line, const std::string &msg) {
  throw Error(code, msg, line);
}

int parse_index(std::string_view token, int line, const char *what) {
  std::int64_t v = 0;
  if (!parse_int64(token, v) || v < 0 || v > 1'000'000) {
    fail(ErrorCode::kSyntax, line,
         std::string("bad ") + what + " '" + std::string(token) + "'");
  }
  return static_cast<int>(v);
}

double parse_real(std::string_view token, int line) {
  double v = 0.0;
  if (!parse_double(token, v)) {
    fail(ErrorCode::kSyntax, line, "bad number '" + std::string(token) + "'");
  }
  return v;
}

// "key=value" with a fixed key.
std::string_view keyed(std::string_view token, std::string_view key, int line) {
  if (token.size() <= key.size() + 1 || token.substr(0, key.size()) != key ||
      token[key.size()] != '=') {
    fail(ErrorCode::kSyntax, line,
         "expected " + std::string(key) + "=<value>, got '" + std::string(token) + "'");
  }
  return token.substr(key.size() + 1);
}

// Tracks which cells of the layer under construction have been written.
struct LayerBuilder {
  LayerSpec layer;
  std::vector<bool> weight_seen;
  std::vector<bool> bias_seen;
  int line = 0;

  void finish() const {
    for (int n = 0; n < layer.out_width; ++n) {
      for (int i = 0; i < layer.in_width; ++i) {
        if (!weight_seen[static_cast<std::size_t>(n) * layer.in_width + i]) {
          fail(ErrorCode::kDimensionMismatch, line,
               "layer is missing weight (" + std::to_string(n) + ", " +
                   std::to_string(i) + ")");
        }
      }
      if (!bias_seen[n]) {
        fail(ErrorCode::kDimensionMismatch, line,
             "layer is missing bias " + std::to_string(n));
      }
    }
  }
};

}  // namespace

void ModelSpec::validate() const {
  if (scale_bits < 0 || scale_bits > kMaxScaleBits) {
    throw Error(ErrorCode::kInvalidInput, "scale out of range");
  }
  if (layers.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "model has no layers");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const LayerSpec &layer = layers[l];
    const std::string where = "layer " + std::to_string(l);
    if (layer.in_width <= 0 || layer.out_width <= 0) {
      throw Error(ErrorCode::kDimensionMismatch, where + ": widths must be positive");
    }
    if (l > 0 && layer.in_width != layers[l - 1].out_width) {
      throw Error(ErrorCode::kDimensionMismatch,
                  where + ": in=" + std::to_string(layer.in_width) +
                      " but previous layer has out=" +
                      std::to_string(layers[l - 1].out_width));
    }
    if (layer.weights.size() !=
            static_cast<std::size_t>(layer.in_width) * layer.out_width ||
        layer.biases.size() != static_cast<std::size_t>(layer.out_width)) {
      throw Error(ErrorCode::kDimensionMismatch, where + ": parameter count");
    }
    for (double w : layer.weights) {
      if (!std::isfinite(w)) throw Error(ErrorCode::kInvalidInput, where + ": non-finite weight");
    }
    for (double b : layer.biases) {
      if (!std::isfinite(b)) throw Error(ErrorCode::kInvalidInput, where + ": non-finite bias");
    }
  }
}

ModelSpec parse_model(std::string_view text) {
  ModelSpec model;
  bool have_header = false;
  std::optional<LayerBuilder> current;

  auto close_layer = [&]() {
    if (current) {
      current->finish();
      model.layers.push_back(std::move(current->layer));
      current.reset();
    }
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const auto tokens = split_whitespace(line);
    if (tokens.empty()) continue;
    const std::string_view directive = tokens[0];

    if (directive == "model") {
      if (have_header) fail(ErrorCode::kSyntax, line_no, "duplicate 'model' line");
      if (tokens.size() != 3) fail(ErrorCode::kSyntax, line_no, "expected: model <id> scale=<s>");
      std::int64_t id = 0;
      if (!parse_int64(tokens[1], id) || id < 0 || id > 65535) {
        fail(ErrorCode::kSyntax, line_no, "model id must be in [0, 65535]");
      }
      std::int64_t scale = 0;
      if (!parse_int64(keyed(tokens[2], "scale", line_no), scale) || scale < 0 ||
          scale > kMaxScaleBits) {
        fail(ErrorCode::kSyntax, line_no, "scale must be in [0, 30]");
      }
      model.model_id = static_cast<std::uint16_t>(id);
      model.scale_bits = static_cast<int>(scale);
      have_header = true;
      continue;
    }
    if (!have_header) {
      fail(ErrorCode::kSyntax, line_no, "the first directive must be 'model'");
    }

    if (directive == "layer") {
      close_layer();
      if (tokens.size() != 5) {
        fail(ErrorCode::kSyntax, line_no, "expected: layer <idx> in=<n> out=<m> act=<kind>");
      }
      const int idx = parse_index(tokens[1], line_no, "layer index");
      if (idx != static_cast<int>(model.layers.size())) {
        fail(ErrorCode::kSyntax, line_no,
             "layer index " + std::to_string(idx) + " out of sequence");
      }
      LayerBuilder b;
      b.line = line_no;
      b.layer.in_width = parse_index(keyed(tokens[2], "in", line_no), line_no, "width");
      b.layer.out_width = parse_index(keyed(tokens[3], "out", line_no), line_no, "width");
      if (b.layer.in_width == 0 || b.layer.out_width == 0) {
        fail(ErrorCode::kDimensionMismatch, line_no, "layer widths must be positive");
      }
      try {
        b.layer.activation = parse_activation(keyed(tokens[4], "act", line_no));
      } catch (const Error &e) {
        if (e.line() != 0) throw;
        fail(e.code(), line_no, e.message());
      }
      if (!model.layers.empty() && b.layer.in_width != model.layers.back().out_width) {
        fail(ErrorCode::kDimensionMismatch, line_no,
             "in=" + std::to_string(b.layer.in_width) +
                 " does not match previous out=" +
                 std::to_string(model.layers.back().out_width));
      }
      const auto cells = static_cast<std::size_t>(b.layer.in_width) * b.layer.out_width;
      b.layer.weights.assign(cells, 0.0);
      b.layer.biases.assign(b.layer.out_width, 0.0);
      b.weight_seen.assign(cells, false);
      b.bias_seen.assign(b.layer.out_width, false);
      current = std::move(b);
      continue;
    }

    if (directive == "w" || directive == "b") {
      if (!current) fail(ErrorCode::kSyntax, line_no, "parameter before any 'layer' line");
      LayerSpec &layer = current->layer;
      const bool is_weight = directive == "w";
      if (tokens.size() != (is_weight ? 4u : 3u)) {
        fail(ErrorCode::kSyntax, line_no,
             is_weight ? "expected: w <neuron> <input> <value>" : "expected: b <neuron> <value>");
      }
      const int neuron = parse_index(tokens[1], line_no, "neuron index");
      if (neuron >= layer.out_width) {
        fail(ErrorCode::kDimensionMismatch, line_no,
             "neuron " + std::to_string(neuron) + " but layer has out=" +
                 std::to_string(layer.out_width));
      }
      if (is_weight) {
        const int input = parse_index(tokens[2], line_no, "input index");
        if (input >= layer.in_width) {
          fail(ErrorCode::kDimensionMismatch, line_no,
               "input " + std::to_string(input) + " but layer has in=" +
                   std::to_string(layer.in_width));
        }
        const auto cell = static_cast<std::size_t>(neuron) * layer.in_width + input;
        if (current->weight_seen[cell]) {
          fail(ErrorCode::kDuplicateEntry, line_no,
               "weight (" + std::to_string(neuron) + ", " + std::to_string(input) +
                   ") given twice");
        }
        current->weight_seen[cell] = true;
        layer.weights[cell] = parse_real(tokens[3], line_no);
      } else {
        if (current->bias_seen[neuron]) {
          fail(ErrorCode::kDuplicateEntry, line_no,
               "bias " + std::to_string(neuron) + " given twice");
        }
        current->bias_seen[neuron] = true;
        layer.biases[neuron] = parse_real(tokens[2], line_no);
      }
      continue;
    }

    fail(ErrorCode::kSyntax, line_no, "unknown directive '" + std::string(directive) + "'");
  }

  if (!have_header) fail(ErrorCode::kSyntax, line_no, "missing 'model' line");
  close_layer();
  if (model.layers.empty()) {
    fail(ErrorCode::kDimensionMismatch, line_no, "model has no layers");
  }
  return model;
}

ModelSpec parse_model(std::istream &in) {
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return parse_model(text);
}

std::string render_model(const ModelSpec &model) {
  std::ostringstream out;
  out << "model " << model.model_id << " scale=" << model.scale_bits << "\n";
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const LayerSpec &layer = model.layers[l];
    out << "layer " << l << " in=" << layer.in_width << " out=" << layer.out_width
        << " act=" << to_string(layer.activation) << "\n";
    for (int n = 0; n < layer.out_width; ++n) {
      for (int i = 0; i < layer.in_width; ++i) {
        out << "w " << n << " " << i << " " << format_double(layer.weight(n, i)) << "\n";
      }
    }
    for (int n = 0; n < layer.out_width; ++n) {
      out << "b " << n << " " << format_double(layer.biases[n]) << "\n";
    }
  }
  return out.str();
}

std::vector<double> float_inference(const ModelSpec &model,
                                    std::span<const double> input) {
  if (input.size() != static_cast<std::size_t>(model.input_width())) {
    throw Error(ErrorCode::kLengthMismatch, "input width does not match model");
  }
  std::vector<double> x(input.begin(), input.end());
  for (const LayerSpec &layer : model.layers) {
    std::vector<double> y(layer.out_width);
    for (int n = 0; n < layer.out_width; ++n) {
      double z = layer.biases[n];
      for (int i = 0; i < layer.in_width; ++i) z += layer.weight(n, i) * x[i];
      switch (layer.activation.kind) {
        case Activation::Kind::kLinear: break;
        case Activation::Kind::kRelu: z = z > 0.0 ? z : 0.0; break;
        case Activation::Kind::kLeakyRelu: z = z > 0.0 ? z : layer.activation.alpha * z; break;
        case Activation::Kind::kSigmoid: z = sigmoid_reference(z); break;
      }
      y[n] = z;
    }
    x = std::move(y);
  }
  return x;
}

}  // namespace inml
