// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INML_TABLE_ENTRIES_H_
#define INML_TABLE_ENTRIES_H_

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "inml/approx.h"
#include "inml/fixed_point.h"
#include "inml/model.h"

namespace inml {

// Activation as installed in the metadata table. The leaky slope is carried
// already quantized at the model scale.
struct ActivationCode {
  Activation::Kind kind = Activation::Kind::kLinear;
  TaylorOrder order = TaylorOrder::kCubic;  // sigmoid only
  QValue alpha;                             // leaky only

  friend bool operator==(const ActivationCode &, const ActivationCode &) = default;
};

// Text forms: linear, relu, leaky:<alpha_raw>, sigmoid:<1|3|5>.
std::string to_string(const ActivationCode &code);
ActivationCode parse_activation_code(std::string_view text);

// One metadata record per model.
struct ModelMetadata {
  std::uint16_t model_id = 0;
  int scale_bits = 0;
  std::vector<int> widths;  // input width followed by each layer's output width
  std::vector<ActivationCode> activations;  // one per layer

  std::size_t num_layers() const { return activations.size(); }

  friend bool operator==(const ModelMetadata &, const ModelMetadata &) = default;
};

struct WeightKey {
  std::uint16_t model_id = 0;
  int layer = 0;
  int neuron = 0;
  int input = 0;

  friend auto operator<=>(const WeightKey &, const WeightKey &) = default;
};

struct BiasKey {
  std::uint16_t model_id = 0;
  int layer = 0;
  int neuron = 0;

  friend auto operator<=>(const BiasKey &, const BiasKey &) = default;
};

using TableKey = std::variant<WeightKey, BiasKey>;

std::string to_string(const TableKey &key);

// Control-plane image of one or more compiled models.
struct TableEntrySet {
  std::map<std::uint16_t, ModelMetadata> metadata;
  std::map<WeightKey, QValue> weights;
  std::map<BiasKey, QValue> biases;

  std::size_t size() const {
    return metadata.size() + weights.size() + biases.size();
  }

  // Replaces every entry of the models present in `other`.
  void merge(const TableEntrySet &other);

  friend bool operator==(const TableEntrySet &, const TableEntrySet &) = default;
};

// Encodes every parameter at fmt (offset must be 0). Saturating a parameter
// is fatal: throws Error(kWeightSaturation) naming the offending cell.
TableEntrySet quantize_model(const ModelSpec &model, FixedPointFormat fmt);

// Canonical text, grouped by model id and sorted by key within a model:
//   M <model_id> <scale> <n_layers> <widths...> <act_codes...>
//   W <model_id> <layer> <neuron> <input> <raw>
//   B <model_id> <layer> <neuron> <raw>
std::string emit_table_entries(const TableEntrySet &entries);

// Inverse of emit_table_entries. Syntax and duplicate-key checks only;
// structural completeness is checked when the entries are loaded.
TableEntrySet parse_table_entries(std::string_view text);

}  // namespace inml

#endif  // INML_TABLE_ENTRIES_H_
