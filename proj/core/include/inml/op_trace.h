// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INML_OP_TRACE_H_
#define INML_OP_TRACE_H_

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace inml {

// Primitive operations a P4 target can execute. kDiv and kFloat exist so that
// traces can be checked against the whitelist; nothing on the integer data
// path ever records them.
enum class OpTag {
  kTableLookup,
  kAdd,
  kSub,
  kMul,
  kShift,
  kCompare,
  kSelect,
  kDiv,
  kFloat,
};

inline constexpr std::size_t kNumOpTags = 9;

std::string_view op_tag_name(OpTag tag);
bool is_whitelisted(OpTag tag);

using OpTrace = std::vector<OpTag>;
using OpCounts = std::array<std::size_t, kNumOpTags>;

OpCounts count_ops(const OpTrace &trace);

// Per-packet execution state threaded through the integer kernels: sticky
// event flags plus an optional trace sink.
struct ExecContext {
  bool saturated = false;
  bool clamped = false;
  OpTrace *trace = nullptr;

  void record(OpTag tag) {
    if (trace != nullptr) trace->push_back(tag);
  }
};

}  // namespace inml

#endif  // INML_OP_TRACE_H_
