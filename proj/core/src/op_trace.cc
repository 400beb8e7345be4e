// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include "inml/op_trace.h"

namespace inml {

std::string_view op_tag_name(OpTag tag) {
  switch (tag) {
    case OpTag::kTableLookup: return "TABLE_LOOKUP";
    case OpTag::kAdd: return "ADD";
    case OpTag::kSub: return "SUB";
    case OpTag::kMul: return "MUL";
    case OpTag::kShift: return "SHIFT";
    case OpTag::kCompare: return "COMPARE";
    case OpTag::kSelect: return "SELECT";
    case OpTag::kDiv: return "DIV";
    case OpTag::kFloat: return "FLOAT";
  }
  return "?";
}

bool is_whitelisted(OpTag tag) {
  return tag != OpTag::kDiv && tag != OpTag::kFloat;
}

OpCounts count_ops(const OpTrace &trace) {
  OpCounts counts{};
  for (OpTag tag : trace) ++counts[static_cast<std::size_t>(tag)];
  return counts;
}

}  // namespace inml
