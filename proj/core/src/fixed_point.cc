// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include "inml/fixed_point.h"

#include <cmath>
#include <string>

#include "inml/error.h"

namespace inml {

namespace {

constexpr std::int64_t kRawMax = std::numeric_limits<std::int32_t>::max();
constexpr std::int64_t kRawMin = std::numeric_limits<std::int32_t>::min();

}  // namespace

FixedPointFormat::FixedPointFormat(int scale_bits, std::int32_t offset)
    : scale_bits_(scale_bits), offset_(offset) {
  if (scale_bits < 0 || scale_bits > kMaxScaleBits) {
    throw Error(ErrorCode::kInvalidInput,
                "scale_bits " + std::to_string(scale_bits) +
                    " outside [0, " + std::to_string(kMaxScaleBits) + "]");
  }
}

double FixedPointFormat::ulp() const { return std::ldexp(1.0, -scale_bits_); }

QResult saturate(std::int64_t v) {
  if (v > kRawMax) return {kQMax, true};
  if (v < kRawMin) return {kQMin, true};
  return {QValue{static_cast<std::int32_t>(v)}, false};
}

QResult encode(double w, FixedPointFormat fmt) {
  if (!std::isfinite(w)) {
    throw Error(ErrorCode::kInvalidInput, "cannot encode a non-finite value");
  }
  // Scaling by a power of two is exact; std::round breaks ties away from 0.
  const double scaled = std::round(std::ldexp(w, fmt.scale_bits()));
  // Anything past 2^40 saturates regardless of the offset.
  constexpr double kGuard = 1099511627776.0;
  if (scaled > kGuard) return {kQMax, true};
  if (scaled < -kGuard) return {kQMin, true};
  return saturate(static_cast<std::int64_t>(scaled) + fmt.offset());
}

double decode(QValue q, FixedPointFormat fmt) {
  const auto centered = static_cast<std::int64_t>(q.raw) - fmt.offset();
  return std::ldexp(static_cast<double>(centered), -fmt.scale_bits());
}

QResult q_add(QValue a, QValue b) {
  return saturate(static_cast<std::int64_t>(a.raw) + b.raw);
}

QResult q_sub(QValue a, QValue b) {
  return saturate(static_cast<std::int64_t>(a.raw) - b.raw);
}

QResult q_neg(QValue a) { return saturate(-static_cast<std::int64_t>(a.raw)); }

QResult q_mul(QValue a, QValue b, FixedPointFormat fmt) {
  if (fmt.offset() != 0) {
    throw Error(ErrorCode::kInvalidInput,
                "fixed-point arithmetic requires offset 0");
  }
  const std::int64_t product = static_cast<std::int64_t>(a.raw) * b.raw;
  return q_shift_round(product, fmt.scale_bits());
}

QResult q_shift_round(std::int64_t v, int s) {
  if (s <= 0) return saturate(v);
  const bool negative = v < 0;
  // Magnitude in unsigned arithmetic so INT64_MIN and the rounding bias
  // cannot overflow.
  const std::uint64_t magnitude =
      negative ? ~static_cast<std::uint64_t>(v) + 1 : static_cast<std::uint64_t>(v);
  const std::uint64_t half = std::uint64_t{1} << (s - 1);
  const std::uint64_t shifted = (magnitude + half) >> s;
  // shifted <= 2^63 >> 1, so it fits in int64 with room for the sign.
  const auto signed_shifted = static_cast<std::int64_t>(shifted);
  return saturate(negative ? -signed_shifted : signed_shifted);
}

std::int64_t add_sat64(std::int64_t a, std::int64_t b, bool &saturated) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    saturated = true;
    return a < 0 ? std::numeric_limits<std::int64_t>::min()
                 : std::numeric_limits<std::int64_t>::max();
  }
  return out;
}

}  // namespace inml
