// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INML_FIXED_POINT_H_
#define INML_FIXED_POINT_H_

#include <compare>
#include <cstdint>
#include <limits>

namespace inml {

inline constexpr int kMaxScaleBits = 30;
inline constexpr int kStorageBits = 32;

// Q-format parameters: a real w is stored as round(w * 2^scale_bits) + offset
// in a 32-bit signed word. The offset is a storage affordance only; every
// arithmetic primitive requires offset 0.
class FixedPointFormat {
 public:
  constexpr FixedPointFormat() = default;
  // Throws Error(kInvalidInput) when scale_bits is outside [0, 30].
  explicit FixedPointFormat(int scale_bits, std::int32_t offset = 0);

  constexpr int scale_bits() const { return scale_bits_; }
  constexpr std::int32_t offset() const { return offset_; }
  static constexpr int width() { return kStorageBits; }

  // Value of one unit in the last place, 2^-s.
  double ulp() const;
  // The raw integer that represents 1.0 (offset 0).
  std::int32_t one() const { return std::int32_t{1} << scale_bits_; }

  friend bool operator==(const FixedPointFormat &,
                         const FixedPointFormat &) = default;

 private:
  int scale_bits_ = 0;
  std::int32_t offset_ = 0;
};

struct QValue {
  std::int32_t raw = 0;

  friend auto operator<=>(const QValue &, const QValue &) = default;
};

inline constexpr QValue kQMax{std::numeric_limits<std::int32_t>::max()};
inline constexpr QValue kQMin{std::numeric_limits<std::int32_t>::min()};

// A primitive's value together with whether it had to saturate.
struct QResult {
  QValue value;
  bool saturated = false;
};

// round-half-away-from-zero(w * 2^s) + b, saturated to 32 bits.
// Throws Error(kInvalidInput) for NaN or infinite w.
QResult encode(double w, FixedPointFormat fmt);

// (q - b) / 2^s. Exact: every 32-bit raw value is representable in a double.
double decode(QValue q, FixedPointFormat fmt);

QResult saturate(std::int64_t v);

QResult q_add(QValue a, QValue b);
QResult q_sub(QValue a, QValue b);
QResult q_neg(QValue a);

// Full 64-bit product, rescaled by q_shift_round(product, s).
// Throws Error(kInvalidInput) when fmt carries a nonzero offset.
QResult q_mul(QValue a, QValue b, FixedPointFormat fmt);

// Divides v by 2^s rounding half away from zero, then saturates. The rounding
// is applied to the magnitude so that q_shift_round(-v, s) ==
// -q_shift_round(v, s).
QResult q_shift_round(std::int64_t v, int s);

// Saturating 64-bit addition used by wide accumulators.
std::int64_t add_sat64(std::int64_t a, std::int64_t b, bool &saturated);

}  // namespace inml

#endif  // INML_FIXED_POINT_H_
