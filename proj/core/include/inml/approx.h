// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INML_APPROX_H_
#define INML_APPROX_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inml/fixed_point.h"
#include "inml/op_trace.h"

namespace inml {

// Truncation degree of the odd sigmoid expansion around 0.
enum class TaylorOrder : int { kLinear = 1, kCubic = 3, kQuintic = 5 };

// Throws Error(kInvalidOrder) for anything but 1, 3 or 5.
TaylorOrder taylor_order_from_int(int order);
constexpr int to_int(TaylorOrder order) { return static_cast<int>(order); }

struct Activation {
  enum class Kind { kLinear, kRelu, kLeakyRelu, kSigmoid };

  Kind kind = Kind::kLinear;
  double alpha = 0.0;                       // leaky slope, in (0, 1)
  TaylorOrder order = TaylorOrder::kCubic;  // sigmoid only

  static Activation linear() { return {}; }
  static Activation relu() { return {Kind::kRelu}; }
  // Throws Error(kInvalidInput) unless 0 < alpha < 1.
  static Activation leaky_relu(double alpha);
  static Activation sigmoid(TaylorOrder order) {
    return {Kind::kSigmoid, 0.0, order};
  }

  friend bool operator==(const Activation &, const Activation &) = default;
};

// Text forms used by the model file: linear, relu, leaky:<alpha>,
// sigmoid:<1|3|5>. Parsing throws Error(kUnknownActivation).
std::string to_string(const Activation &act);
Activation parse_activation(std::string_view text);

inline constexpr double kDefaultSigmoidClamp = 2.0;

// [0.5, 1/4, -1/48, 1/1440] encoded at fmt and truncated to the order:
// two constants for order 1, three for order 3, four for order 5.
std::vector<QValue> sigmoid_constants(TaylorOrder order, FixedPointFormat fmt);

// Everything one sigmoid stage needs on the data path. Built once on the
// control plane; the kernel itself never touches floating point.
struct SigmoidTable {
  TaylorOrder order = TaylorOrder::kCubic;
  FixedPointFormat fmt;
  std::vector<QValue> coefficients;  // sigmoid_constants(order, fmt)
  QValue input_bound;                // encode(clamp bound)
  QValue one;                        // 2^s
};

SigmoidTable make_sigmoid_table(TaylorOrder order, FixedPointFormat fmt,
                                double clamp_bound = kDefaultSigmoidClamp);

// Clamps x to +-input_bound, evaluates bias + x*(c1 + t*(c3 + t*c5)) with
// t = x*x using q_mul/q_add in that nesting, then clamps to [0, 1].
QValue sigmoid_taylor(QValue x, const SigmoidTable &table, ExecContext &ctx);
QValue sigmoid_taylor(QValue x, TaylorOrder order, FixedPointFormat fmt,
                      ExecContext *ctx = nullptr);

// Float references. These are for reporting and evaluation only.
double sigmoid_reference(double x);
double sigmoid_polynomial(double x, TaylorOrder order);
// sigmoid(x) - P_order(x).
double taylor_residual(double x, TaylorOrder order);

QValue relu(QValue x, ExecContext *ctx = nullptr);
// x if x > 0, otherwise alpha_q * x. Parametric ReLU is this operation with
// alpha_q read from a table entry.
QValue leaky_relu(QValue x, QValue alpha_q, FixedPointFormat fmt,
                  ExecContext *ctx = nullptr);

// (y - yhat)^2.
QValue loss_mse(QValue y, QValue yhat, FixedPointFormat fmt,
                ExecContext *ctx = nullptr);

// Cross-entropy losses as their printed third-order polynomials:
//   BCE: -y(p - p^2/2 + p^3/3) - (1-y)(-p - p^2/2 - p^3/3)
//   CCE: -sum_i y_i(p_i - p_i^2/2 + p_i^3/3)
// The y=1 branch is the series of -y*log(1+p), not of -y*log(p); it is kept
// as printed. bce_reference/cce_reference give the true losses.
QValue loss_bce_taylor(QValue y, QValue yhat, FixedPointFormat fmt,
                       ExecContext *ctx = nullptr);
// Throws Error(kLengthMismatch) when the spans differ in length.
QValue loss_cce_taylor(std::span<const QValue> y, std::span<const QValue> yhat,
                       FixedPointFormat fmt, ExecContext *ctx = nullptr);

double bce_reference(double y, double yhat);
double cce_reference(std::span<const double> y, std::span<const double> yhat);

}  // namespace inml

#endif  // INML_APPROX_H_
