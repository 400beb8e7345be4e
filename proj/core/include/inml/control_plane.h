// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INML_CONTROL_PLANE_H_
#define INML_CONTROL_PLANE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "inml/approx.h"
#include "inml/fixed_point.h"
#include "inml/table_entries.h"

namespace inml {

// Static unrolling bounds of the simulated pipeline. A P4 program cannot
// loop, so the layer and neuron loops are bounded at compile time.
inline constexpr int kMaxLayerWidth = 64;
inline constexpr int kMaxDepth = 8;

struct CompiledLayer {
  int in_width = 0;
  int out_width = 0;
  std::vector<QValue> weights;  // row-major, out_width x in_width
  std::vector<QValue> biases;
  ActivationCode activation;
  std::optional<SigmoidTable> sigmoid;  // present for sigmoid layers

  QValue weight(int neuron, int input) const {
    return weights[static_cast<std::size_t>(neuron) * in_width + input];
  }
};

struct CompiledModel {
  ModelMetadata metadata;
  FixedPointFormat fmt;
  std::vector<CompiledLayer> layers;
};

// One published, immutable view of every installed table.
class Snapshot {
 public:
  using ModelMap = std::map<std::uint16_t, std::shared_ptr<const CompiledModel>>;

  Snapshot() = default;
  Snapshot(std::uint64_t epoch, ModelMap models)
      : epoch_(epoch), models_(std::move(models)) {}

  std::uint64_t epoch() const { return epoch_; }
  const CompiledModel *find(std::uint16_t model_id) const;
  std::optional<QValue> lookup(const TableKey &key) const;
  const ModelMap &models() const { return models_; }

  // Table image of this snapshot, as emit_table_entries would print it.
  TableEntrySet entries() const;

 private:
  std::uint64_t epoch_ = 0;
  ModelMap models_;
};

// Single-writer, many-reader table store. Writers build a new snapshot and
// publish it with one atomic pointer swap; a reader that grabbed the
// previous snapshot keeps using it until it lets go.
class ControlPlane {
 public:
  ControlPlane();

  ControlPlane(const ControlPlane &) = delete;
  ControlPlane &operator=(const ControlPlane &) = delete;

  std::shared_ptr<const Snapshot> snapshot() const;
  std::uint64_t epoch() const { return snapshot()->epoch(); }

  // Installs every model in `entries`, replacing models with the same id.
  // Throws Error(kMalformedTables) on a missing M record, a missing or
  // surplus W/B entry, or a model past the unrolling bounds.
  std::uint64_t load_tables(const TableEntrySet &entries);

  // Throws Error(kUnknownKey) when the key is not installed.
  std::uint64_t update_entry(const TableKey &key, QValue value);

 private:
  void publish(std::shared_ptr<const Snapshot> next);

  std::mutex writer_mu_;
  std::shared_ptr<const Snapshot> current_;
};

// Builds the data-path image of one model. Exposed for tests.
CompiledModel compile_model(const ModelMetadata &meta, const TableEntrySet &entries);

}  // namespace inml

#endif  // INML_CONTROL_PLANE_H_
