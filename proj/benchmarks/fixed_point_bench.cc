// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "inml/approx.h"
#include "inml/fixed_point.h"

namespace inml {
namespace {

std::vector<QValue> random_values(std::size_t n, std::int32_t bound) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int32_t> dist(-bound, bound);
  std::vector<QValue> out(n);
  for (auto &v : out) v.raw = dist(rng);
  return out;
}

void BM_QMul(benchmark::State &state) {
  const FixedPointFormat fmt(16);
  const auto a = random_values(1024, 1 << 20);
  const auto b = random_values(1024, 1 << 20);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(q_mul(a[i & 1023], b[i & 1023], fmt));
    ++i;
  }
}
BENCHMARK(BM_QMul);

void BM_Encode(benchmark::State &state) {
  const FixedPointFormat fmt(16);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::vector<double> w(1024);
  for (double &x : w) x = u(rng);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode(w[i & 1023], fmt));
    ++i;
  }
}
BENCHMARK(BM_Encode);

void BM_SigmoidTaylor(benchmark::State &state) {
  const FixedPointFormat fmt(16);
  const SigmoidTable table =
      make_sigmoid_table(taylor_order_from_int(static_cast<int>(state.range(0))), fmt);
  const auto x = random_values(1024, 3 << 16);
  std::size_t i = 0;
  for (auto _ : state) {
    ExecContext ctx;
    benchmark::DoNotOptimize(sigmoid_taylor(x[i & 1023], table, ctx));
    ++i;
  }
}
BENCHMARK(BM_SigmoidTaylor)->Arg(1)->Arg(3)->Arg(5);

}  // namespace
}  // namespace inml
