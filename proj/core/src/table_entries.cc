// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include "inml/table_entries.h"

#include <set>
#include <sstream>

#include "inml/error.h"
#include "inml/text_util.h"

namespace inml {

namespace {

[[noreturn]] void syntax(int line, const std::string &msg) {
  throw Error(ErrorCode::kSyntax, msg, line);
}

std::int64_t parse_field(std::string_view token, int line, std::int64_t lo,
                         std::int64_t hi) {
  std::int64_t v = 0;
  if (!parse_int64(token, v) || v < lo || v > hi) {
    syntax(line, "field '" + std::string(token) + "' outside [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

constexpr std::int64_t kRawLo = -2147483648LL;
constexpr std::int64_t kRawHi = 2147483647LL;
constexpr std::int64_t kIndexHi = 65535;

}  // namespace

std::string to_string(const ActivationCode &code) {
  switch (code.kind) {
    case Activation::Kind::kLinear: return "linear";
    case Activation::Kind::kRelu: return "relu";
    case Activation::Kind::kLeakyRelu: return "leaky:" + std::to_string(code.alpha.raw);
    case Activation::Kind::kSigmoid: return "sigmoid:" + std::to_string(to_int(code.order));
  }
  return "linear";
}

ActivationCode parse_activation_code(std::string_view text) {
  ActivationCode code;
  if (text == "linear") return code;
  if (text == "relu") {
    code.kind = Activation::Kind::kRelu;
    return code;
  }
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const auto name = text.substr(0, colon);
    const auto arg = text.substr(colon + 1);
    std::int64_t v = 0;
    if (name == "leaky" && parse_int64(arg, v) && v >= kRawLo && v <= kRawHi) {
      code.kind = Activation::Kind::kLeakyRelu;
      code.alpha = QValue{static_cast<std::int32_t>(v)};
      return code;
    }
    if (name == "sigmoid" && parse_int64(arg, v) && (v == 1 || v == 3 || v == 5)) {
      code.kind = Activation::Kind::kSigmoid;
      code.order = taylor_order_from_int(static_cast<int>(v));
      return code;
    }
  }
  throw Error(ErrorCode::kUnknownActivation,
              "unknown activation code '" + std::string(text) + "'");
}

std::string to_string(const TableKey &key) {
  return std::visit(
      [](const auto &k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, WeightKey>) {
          return "W(" + std::to_string(k.model_id) + "," + std::to_string(k.layer) +
                 "," + std::to_string(k.neuron) + "," + std::to_string(k.input) + ")";
        } else {
          return "B(" + std::to_string(k.model_id) + "," + std::to_string(k.layer) +
                 "," + std::to_string(k.neuron) + ")";
        }
      },
      key);
}

void TableEntrySet::merge(const TableEntrySet &other) {
  std::set<std::uint16_t> replaced;
  for (const auto &[id, meta] : other.metadata) replaced.insert(id);
  for (const auto &[key, value] : other.weights) replaced.insert(key.model_id);
  for (const auto &[key, value] : other.biases) replaced.insert(key.model_id);

  for (std::uint16_t id : replaced) {
    metadata.erase(id);
    auto w = weights.lower_bound(WeightKey{id, 0, 0, 0});
    while (w != weights.end() && w->first.model_id == id) w = weights.erase(w);
    auto b = biases.lower_bound(BiasKey{id, 0, 0});
    while (b != biases.end() && b->first.model_id == id) b = biases.erase(b);
  }
  metadata.insert(other.metadata.begin(), other.metadata.end());
  weights.insert(other.weights.begin(), other.weights.end());
  biases.insert(other.biases.begin(), other.biases.end());
}

TableEntrySet quantize_model(const ModelSpec &model, FixedPointFormat fmt) {
  if (fmt.offset() != 0) {
    throw Error(ErrorCode::kInvalidInput, "table entries are encoded with offset 0");
  }
  model.validate();

  TableEntrySet out;
  ModelMetadata meta;
  meta.model_id = model.model_id;
  meta.scale_bits = fmt.scale_bits();
  meta.widths.push_back(model.input_width());

  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const LayerSpec &layer = model.layers[l];
    const int li = static_cast<int>(l);
    meta.widths.push_back(layer.out_width);

    ActivationCode code;
    code.kind = layer.activation.kind;
    code.order = layer.activation.order;
    if (code.kind == Activation::Kind::kLeakyRelu) {
      const QResult alpha = encode(layer.activation.alpha, fmt);
      if (alpha.saturated) {
        throw Error(ErrorCode::kWeightSaturation,
                    "leaky alpha of layer " + std::to_string(l) + " saturates");
      }
      code.alpha = alpha.value;
    }
    meta.activations.push_back(code);

    for (int n = 0; n < layer.out_width; ++n) {
      for (int i = 0; i < layer.in_width; ++i) {
        const QResult q = encode(layer.weight(n, i), fmt);
        if (q.saturated) {
          throw Error(ErrorCode::kWeightSaturation,
                      "weight (layer " + std::to_string(l) + ", neuron " +
                          std::to_string(n) + ", input " + std::to_string(i) +
                          ") = " + format_double(layer.weight(n, i)) +
                          " does not fit at scale " + std::to_string(fmt.scale_bits()));
        }
        out.weights.emplace(WeightKey{model.model_id, li, n, i}, q.value);
      }
      const QResult b = encode(layer.biases[n], fmt);
      if (b.saturated) {
        throw Error(ErrorCode::kWeightSaturation,
                    "bias (layer " + std::to_string(l) + ", neuron " +
                        std::to_string(n) + ") = " + format_double(layer.biases[n]) +
                        " does not fit at scale " + std::to_string(fmt.scale_bits()));
      }
      out.biases.emplace(BiasKey{model.model_id, li, n}, b.value);
    }
  }
  out.metadata.emplace(model.model_id, std::move(meta));
  return out;
}

std::string emit_table_entries(const TableEntrySet &entries) {
  std::set<std::uint16_t> ids;
  for (const auto &[id, meta] : entries.metadata) ids.insert(id);
  for (const auto &[key, value] : entries.weights) ids.insert(key.model_id);
  for (const auto &[key, value] : entries.biases) ids.insert(key.model_id);

  std::ostringstream out;
  for (std::uint16_t id : ids) {
    if (auto it = entries.metadata.find(id); it != entries.metadata.end()) {
      const ModelMetadata &meta = it->second;
      out << "M " << meta.model_id << " " << meta.scale_bits << " " << meta.num_layers();
      for (int w : meta.widths) out << " " << w;
      for (const auto &code : meta.activations) out << " " << to_string(code);
      out << "\n";
    }
    for (auto it = entries.weights.lower_bound(WeightKey{id, 0, 0, 0});
         it != entries.weights.end() && it->first.model_id == id; ++it) {
      const WeightKey &k = it->first;
      out << "W " << k.model_id << " " << k.layer << " " << k.neuron << " " << k.input
          << " " << it->second.raw << "\n";
    }
    for (auto it = entries.biases.lower_bound(BiasKey{id, 0, 0});
         it != entries.biases.end() && it->first.model_id == id; ++it) {
      const BiasKey &k = it->first;
      out << "B " << k.model_id << " " << k.layer << " " << k.neuron << " "
          << it->second.raw << "\n";
    }
  }
  return out.str();
}

TableEntrySet parse_table_entries(std::string_view text) {
  TableEntrySet out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const auto tok = split_whitespace(line);
    if (tok.empty()) continue;

    if (tok[0] == "M") {
      if (tok.size() < 4) syntax(line_no, "expected: M <id> <scale> <n_layers> ...");
      ModelMetadata meta;
      meta.model_id = static_cast<std::uint16_t>(parse_field(tok[1], line_no, 0, 65535));
      meta.scale_bits = static_cast<int>(parse_field(tok[2], line_no, 0, kMaxScaleBits));
      const auto layers = static_cast<std::size_t>(parse_field(tok[3], line_no, 1, 255));
      if (tok.size() != 4 + (layers + 1) + layers) {
        syntax(line_no, "M record for " + std::to_string(layers) + " layers needs " +
                            std::to_string(2 * layers + 1) + " trailing fields");
      }
      for (std::size_t i = 0; i <= layers; ++i) {
        meta.widths.push_back(static_cast<int>(parse_field(tok[4 + i], line_no, 1, kIndexHi)));
      }
      for (std::size_t i = 0; i < layers; ++i) {
        try {
          meta.activations.push_back(parse_activation_code(tok[5 + layers + i]));
        } catch (const Error &e) {
          throw Error(e.code(), e.message(), line_no);
        }
      }
      if (!out.metadata.emplace(meta.model_id, meta).second) {
        throw Error(ErrorCode::kDuplicateEntry,
                    "second M record for model " + std::to_string(meta.model_id), line_no);
      }
    } else if (tok[0] == "W") {
      if (tok.size() != 6) syntax(line_no, "expected: W <id> <layer> <neuron> <input> <raw>");
      const WeightKey key{static_cast<std::uint16_t>(parse_field(tok[1], line_no, 0, 65535)),
                          static_cast<int>(parse_field(tok[2], line_no, 0, 254)),
                          static_cast<int>(parse_field(tok[3], line_no, 0, kIndexHi)),
                          static_cast<int>(parse_field(tok[4], line_no, 0, kIndexHi))};
      const QValue v{static_cast<std::int32_t>(parse_field(tok[5], line_no, kRawLo, kRawHi))};
      if (!out.weights.emplace(key, v).second) {
        throw Error(ErrorCode::kDuplicateEntry, "duplicate " + to_string(TableKey{key}), line_no);
      }
    } else if (tok[0] == "B") {
      if (tok.size() != 5) syntax(line_no, "expected: B <id> <layer> <neuron> <raw>");
      const BiasKey key{static_cast<std::uint16_t>(parse_field(tok[1], line_no, 0, 65535)),
                        static_cast<int>(parse_field(tok[2], line_no, 0, 254)),
                        static_cast<int>(parse_field(tok[3], line_no, 0, kIndexHi))};
      const QValue v{static_cast<std::int32_t>(parse_field(tok[4], line_no, kRawLo, kRawHi))};
      if (!out.biases.emplace(key, v).second) {
        throw Error(ErrorCode::kDuplicateEntry, "duplicate " + to_string(TableKey{key}), line_no);
      }
    } else {
      syntax(line_no, "unknown record type '" + std::string(tok[0]) + "'");
    }
  }
  return out;
}

}  // namespace inml
