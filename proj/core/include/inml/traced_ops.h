// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INML_TRACED_OPS_H_
#define INML_TRACED_OPS_H_

#include <cstdint>

#include "inml/fixed_point.h"
#include "inml/op_trace.h"

// Fixed-point primitives that record their op tags and fold saturation into
// the sticky context flag. Every integer kernel on the data path is written
// in terms of these so that traces match execution exactly.
namespace inml::ops {

inline QValue take(QResult r, ExecContext &ctx) {
  ctx.saturated |= r.saturated;
  return r.value;
}

inline QValue lookup(QValue v, ExecContext &ctx) {
  ctx.record(OpTag::kTableLookup);
  return v;
}

inline QValue add(QValue a, QValue b, ExecContext &ctx) {
  ctx.record(OpTag::kAdd);
  return take(q_add(a, b), ctx);
}

inline QValue sub(QValue a, QValue b, ExecContext &ctx) {
  ctx.record(OpTag::kSub);
  return take(q_sub(a, b), ctx);
}

inline QValue neg(QValue a, ExecContext &ctx) {
  ctx.record(OpTag::kSub);
  return take(q_neg(a), ctx);
}

inline QValue mul(QValue a, QValue b, FixedPointFormat fmt, ExecContext &ctx) {
  ctx.record(OpTag::kMul);
  ctx.record(OpTag::kShift);
  return take(q_mul(a, b, fmt), ctx);
}

inline QValue shift_round(std::int64_t v, int s, ExecContext &ctx) {
  ctx.record(OpTag::kShift);
  return take(q_shift_round(v, s), ctx);
}

// Clamp to [lo, hi] as two compare/select pairs; sets ctx.clamped when the
// value moved.
inline QValue clamp(QValue x, QValue lo, QValue hi, ExecContext &ctx) {
  ctx.record(OpTag::kCompare);
  ctx.record(OpTag::kSelect);
  ctx.record(OpTag::kCompare);
  ctx.record(OpTag::kSelect);
  QValue out = x < lo ? lo : x;
  out = out > hi ? hi : out;
  if (out != x) ctx.clamped = true;
  return out;
}

}  // namespace inml::ops

#endif  // INML_TRACED_OPS_H_
