// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include "inml/control_plane.h"

#include <atomic>
#include <set>
#include <string>

#include "inml/error.h"

namespace inml {

namespace {

[[noreturn]] void malformed(std::uint16_t model_id, const std::string &msg) {
  throw Error(ErrorCode::kMalformedTables,
              "model " + std::to_string(model_id) + ": " + msg);
}

}  // namespace

const CompiledModel *Snapshot::find(std::uint16_t model_id) const {
  const auto it = models_.find(model_id);
  return it == models_.end() ? nullptr : it->second.get();
}

std::optional<QValue> Snapshot::lookup(const TableKey &key) const {
  if (const auto *w = std::get_if<WeightKey>(&key)) {
    const CompiledModel *m = find(w->model_id);
    if (m == nullptr || w->layer < 0 || w->layer >= static_cast<int>(m->layers.size())) {
      return std::nullopt;
    }
    const CompiledLayer &layer = m->layers[w->layer];
    if (w->neuron < 0 || w->neuron >= layer.out_width || w->input < 0 ||
        w->input >= layer.in_width) {
      return std::nullopt;
    }
    return layer.weight(w->neuron, w->input);
  }
  const auto &b = std::get<BiasKey>(key);
  const CompiledModel *m = find(b.model_id);
  if (m == nullptr || b.layer < 0 || b.layer >= static_cast<int>(m->layers.size())) {
    return std::nullopt;
  }
  const CompiledLayer &layer = m->layers[b.layer];
  if (b.neuron < 0 || b.neuron >= layer.out_width) return std::nullopt;
  return layer.biases[b.neuron];
}

TableEntrySet Snapshot::entries() const {
  TableEntrySet out;
  for (const auto &[id, model] : models_) {
    out.metadata.emplace(id, model->metadata);
    for (std::size_t l = 0; l < model->layers.size(); ++l) {
      const CompiledLayer &layer = model->layers[l];
      const int li = static_cast<int>(l);
      for (int n = 0; n < layer.out_width; ++n) {
        for (int i = 0; i < layer.in_width; ++i) {
          out.weights.emplace(WeightKey{id, li, n, i}, layer.weight(n, i));
        }
        out.biases.emplace(BiasKey{id, li, n}, layer.biases[n]);
      }
    }
  }
  return out;
}

CompiledModel compile_model(const ModelMetadata &meta, const TableEntrySet &entries) {
  const std::uint16_t id = meta.model_id;
  if (meta.num_layers() == 0) malformed(id, "no layers");
  if (meta.num_layers() > static_cast<std::size_t>(kMaxDepth)) {
    malformed(id, "depth " + std::to_string(meta.num_layers()) + " exceeds " +
                      std::to_string(kMaxDepth));
  }
  if (meta.widths.size() != meta.num_layers() + 1) malformed(id, "width list length");
  for (int w : meta.widths) {
    if (w < 1 || w > kMaxLayerWidth) {
      malformed(id, "width " + std::to_string(w) + " outside [1, " +
                        std::to_string(kMaxLayerWidth) + "]");
    }
  }
  if (meta.scale_bits < 0 || meta.scale_bits > kMaxScaleBits) malformed(id, "scale");

  CompiledModel model;
  model.metadata = meta;
  model.fmt = FixedPointFormat(meta.scale_bits);
  for (std::size_t l = 0; l < meta.num_layers(); ++l) {
    CompiledLayer layer;
    const int li = static_cast<int>(l);
    layer.in_width = meta.widths[l];
    layer.out_width = meta.widths[l + 1];
    layer.activation = meta.activations[l];
    layer.weights.reserve(static_cast<std::size_t>(layer.in_width) * layer.out_width);
    for (int n = 0; n < layer.out_width; ++n) {
      for (int i = 0; i < layer.in_width; ++i) {
        const auto it = entries.weights.find(WeightKey{id, li, n, i});
        if (it == entries.weights.end()) {
          malformed(id, "missing " + to_string(TableKey{WeightKey{id, li, n, i}}));
        }
        layer.weights.push_back(it->second);
      }
      const auto it = entries.biases.find(BiasKey{id, li, n});
      if (it == entries.biases.end()) {
        malformed(id, "missing " + to_string(TableKey{BiasKey{id, li, n}}));
      }
      layer.biases.push_back(it->second);
    }
    if (layer.activation.kind == Activation::Kind::kSigmoid) {
      layer.sigmoid = make_sigmoid_table(layer.activation.order, model.fmt);
    }
    model.layers.push_back(std::move(layer));
  }
  return model;
}

ControlPlane::ControlPlane() : current_(std::make_shared<const Snapshot>()) {}

std::shared_ptr<const Snapshot> ControlPlane::snapshot() const {
  return std::atomic_load_explicit(&current_, std::memory_order_acquire);
}

void ControlPlane::publish(std::shared_ptr<const Snapshot> next) {
  std::atomic_store_explicit(&current_, std::move(next), std::memory_order_release);
}

std::uint64_t ControlPlane::load_tables(const TableEntrySet &entries) {
  std::set<std::uint16_t> referenced;
  for (const auto &[key, value] : entries.weights) referenced.insert(key.model_id);
  for (const auto &[key, value] : entries.biases) referenced.insert(key.model_id);
  for (std::uint16_t id : referenced) {
    if (entries.metadata.count(id) == 0) malformed(id, "W/B entries without an M record");
  }
  if (entries.metadata.empty()) {
    throw Error(ErrorCode::kMalformedTables, "entry set has no M record");
  }

  Snapshot::ModelMap compiled;
  for (const auto &[id, meta] : entries.metadata) {
    if (meta.model_id != id) malformed(id, "metadata id mismatch");
    auto model = std::make_shared<const CompiledModel>(compile_model(meta, entries));
    std::size_t expected_w = 0;
    std::size_t expected_b = 0;
    for (const CompiledLayer &layer : model->layers) {
      expected_w += layer.weights.size();
      expected_b += layer.biases.size();
    }
    std::size_t have_w = 0;
    for (auto it = entries.weights.lower_bound(WeightKey{id, 0, 0, 0});
         it != entries.weights.end() && it->first.model_id == id; ++it) {
      ++have_w;
    }
    std::size_t have_b = 0;
    for (auto it = entries.biases.lower_bound(BiasKey{id, 0, 0});
         it != entries.biases.end() && it->first.model_id == id; ++it) {
      ++have_b;
    }
    if (have_w != expected_w || have_b != expected_b) {
      malformed(id, "entries outside the shape declared by its M record");
    }
    compiled.emplace(id, std::move(model));
  }

  std::lock_guard<std::mutex> lock(writer_mu_);
  const auto prev = snapshot();
  Snapshot::ModelMap models = prev->models();
  for (auto &[id, model] : compiled) models[id] = std::move(model);
  const std::uint64_t epoch = prev->epoch() + 1;
  publish(std::make_shared<const Snapshot>(epoch, std::move(models)));
  return epoch;
}

std::uint64_t ControlPlane::update_entry(const TableKey &key, QValue value) {
  std::lock_guard<std::mutex> lock(writer_mu_);
  const auto prev = snapshot();
  if (!prev->lookup(key).has_value()) {
    throw Error(ErrorCode::kUnknownKey, to_string(key) + " is not installed");
  }
  const std::uint16_t id =
      std::visit([](const auto &k) { return k.model_id; }, key);
  // Copy only the model being edited; the others stay shared.
  auto edited = std::make_shared<CompiledModel>(*prev->find(id));
  if (const auto *w = std::get_if<WeightKey>(&key)) {
    CompiledLayer &layer = edited->layers[w->layer];
    layer.weights[static_cast<std::size_t>(w->neuron) * layer.in_width + w->input] = value;
  } else {
    const auto &b = std::get<BiasKey>(key);
    edited->layers[b.layer].biases[b.neuron] = value;
  }
  Snapshot::ModelMap models = prev->models();
  models[id] = std::move(edited);
  const std::uint64_t epoch = prev->epoch() + 1;
  publish(std::make_shared<const Snapshot>(epoch, std::move(models)));
  return epoch;
}

}  // namespace inml
