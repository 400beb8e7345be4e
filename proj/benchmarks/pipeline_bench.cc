// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "inml/control_plane.h"
#include "inml/eval.h"
#include "inml/pipeline.h"
#include "inml/table_entries.h"

namespace inml {
namespace {

void run_model(benchmark::State &state, const ModelSpec &model) {
  ControlPlane control;
  control.load_tables(quantize_model(model, FixedPointFormat(model.scale_bits)));
  const auto frames = gen_traffic(model, 256, kDefaultSeed, -1.0, 1.0);
  const auto snapshot = control.snapshot();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(process_packet(frames[i & 255], *snapshot));
    ++i;
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

void BM_PacketLinear(benchmark::State &state) { run_model(state, linear_reference_model()); }
BENCHMARK(BM_PacketLinear);

void BM_PacketSigmoid(benchmark::State &state) {
  run_model(state, sigmoid_reference_model(taylor_order_from_int(static_cast<int>(state.range(0)))));
}
BENCHMARK(BM_PacketSigmoid)->Arg(1)->Arg(3)->Arg(5);

void BM_StreamWithSnapshotPerPacket(benchmark::State &state) {
  const ModelSpec model = sigmoid_reference_model();
  ControlPlane control;
  control.load_tables(quantize_model(model, FixedPointFormat(model.scale_bits)));
  const auto frames = gen_traffic(model, 1024, kDefaultSeed, -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(process_stream(frames, control, false));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * frames.size()));
}
BENCHMARK(BM_StreamWithSnapshotPerPacket);

}  // namespace
}  // namespace inml
