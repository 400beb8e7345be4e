// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

// The distro benchmark_main archive carries LTO bytecode from another compiler build.
#include <benchmark/benchmark.h>

BENCHMARK_MAIN();
