// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include "inml/approx.h"

#include <charconv>
#include <cmath>

#include "inml/error.h"
#include "inml/text_util.h"
#include "inml/traced_ops.h"

namespace inml {

namespace {

constexpr double kSigmoidCoefficients[] = {0.5, 1.0 / 4.0, -1.0 / 48.0,
                                           1.0 / 1440.0};

// Number of coefficients (bias included) kept at each order.
std::size_t coefficient_count(TaylorOrder order) {
  return static_cast<std::size_t>(to_int(order) + 3) / 2;
}

QValue encode_constant(double value, FixedPointFormat fmt) {
  return encode(value, FixedPointFormat(fmt.scale_bits())).value;
}

// p - p^2/2 + p^3/3 and -p - p^2/2 - p^3/3 share the same powers.
struct LogSeries {
  QValue plus;   // p - p^2/2 + p^3/3
  QValue minus;  // -p - p^2/2 - p^3/3
};

LogSeries log_series(QValue p, FixedPointFormat fmt, ExecContext &ctx) {
  const QValue half = encode_constant(0.5, fmt);
  const QValue third = encode_constant(1.0 / 3.0, fmt);
  const QValue p2 = ops::mul(p, p, fmt, ctx);
  const QValue p3 = ops::mul(p2, p, fmt, ctx);
  const QValue half_p2 = ops::mul(half, p2, fmt, ctx);
  const QValue third_p3 = ops::mul(third, p3, fmt, ctx);
  LogSeries out;
  out.plus = ops::add(ops::sub(p, half_p2, ctx), third_p3, ctx);
  out.minus = ops::sub(ops::sub(ops::neg(p, ctx), half_p2, ctx), third_p3, ctx);
  return out;
}

}  // namespace

TaylorOrder taylor_order_from_int(int order) {
  switch (order) {
    case 1: return TaylorOrder::kLinear;
    case 3: return TaylorOrder::kCubic;
    case 5: return TaylorOrder::kQuintic;
    default:
      throw Error(ErrorCode::kInvalidOrder,
                  "taylor order must be 1, 3 or 5, got " + std::to_string(order));
  }
}

Activation Activation::leaky_relu(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "leaky relu alpha must lie in (0, 1)");
  }
  return {Kind::kLeakyRelu, alpha, TaylorOrder::kCubic};
}

std::string to_string(const Activation &act) {
  switch (act.kind) {
    case Activation::Kind::kLinear: return "linear";
    case Activation::Kind::kRelu: return "relu";
    case Activation::Kind::kLeakyRelu: return "leaky:" + format_double(act.alpha);
    case Activation::Kind::kSigmoid:
      return "sigmoid:" + std::to_string(to_int(act.order));
  }
  return "linear";
}

Activation parse_activation(std::string_view text) {
  if (text == "linear") return Activation::linear();
  if (text == "relu") return Activation::relu();
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const std::string_view name = text.substr(0, colon);
    const std::string_view arg = text.substr(colon + 1);
    if (name == "leaky") {
      double alpha = 0.0;
      if (!parse_double(arg, alpha) || !(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorCode::kUnknownActivation,
                    "leaky alpha must be a number in (0, 1): '" +
                        std::string(arg) + "'");
      }
      return Activation::leaky_relu(alpha);
    }
    if (name == "sigmoid") {
      if (arg == "1") return Activation::sigmoid(TaylorOrder::kLinear);
      if (arg == "3") return Activation::sigmoid(TaylorOrder::kCubic);
      if (arg == "5") return Activation::sigmoid(TaylorOrder::kQuintic);
      throw Error(ErrorCode::kUnknownActivation,
                  "sigmoid order must be 1, 3 or 5: '" + std::string(arg) + "'");
    }
  }
  throw Error(ErrorCode::kUnknownActivation,
              "unknown activation '" + std::string(text) + "'");
}

std::vector<QValue> sigmoid_constants(TaylorOrder order, FixedPointFormat fmt) {
  const std::size_t n = coefficient_count(order);
  std::vector<QValue> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(encode_constant(kSigmoidCoefficients[i], fmt));
  }
  return out;
}

SigmoidTable make_sigmoid_table(TaylorOrder order, FixedPointFormat fmt,
                                double clamp_bound) {
  if (!(clamp_bound > 0.0) || !std::isfinite(clamp_bound)) {
    throw Error(ErrorCode::kInvalidInput, "sigmoid clamp bound must be positive");
  }
  SigmoidTable table;
  table.order = order;
  table.fmt = FixedPointFormat(fmt.scale_bits());
  table.coefficients = sigmoid_constants(order, fmt);
  table.input_bound = encode_constant(clamp_bound, fmt);
  table.one = QValue{fmt.one()};
  return table;
}

QValue sigmoid_taylor(QValue x, const SigmoidTable &table, ExecContext &ctx) {
  const FixedPointFormat fmt = table.fmt;
  const auto &c = table.coefficients;

  // One lookup returns the range constants (input bound and 1.0).
  const QValue bound = ops::lookup(table.input_bound, ctx);
  const QValue xc = ops::clamp(x, QValue{-bound.raw}, bound, ctx);

  QValue acc = ops::lookup(c.back(), ctx);
  if (c.size() > 2) {
    const QValue t = ops::mul(xc, xc, fmt, ctx);
    for (std::size_t i = c.size() - 1; i-- > 1;) {
      acc = ops::add(ops::lookup(c[i], ctx), ops::mul(acc, t, fmt, ctx), ctx);
    }
  }
  const QValue bias = ops::lookup(c[0], ctx);
  const QValue y = ops::add(bias, ops::mul(acc, xc, fmt, ctx), ctx);
  return ops::clamp(y, QValue{0}, table.one, ctx);
}

QValue sigmoid_taylor(QValue x, TaylorOrder order, FixedPointFormat fmt,
                      ExecContext *ctx) {
  ExecContext local;
  return sigmoid_taylor(x, make_sigmoid_table(order, fmt),
                        ctx != nullptr ? *ctx : local);
}

double sigmoid_reference(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double sigmoid_polynomial(double x, TaylorOrder order) {
  const std::size_t n = coefficient_count(order);
  const double t = x * x;
  double acc = kSigmoidCoefficients[n - 1];
  for (std::size_t i = n - 1; i-- > 1;) acc = kSigmoidCoefficients[i] + acc * t;
  return kSigmoidCoefficients[0] + acc * x;
}

double taylor_residual(double x, TaylorOrder order) {
  return sigmoid_reference(x) - sigmoid_polynomial(x, order);
}

QValue relu(QValue x, ExecContext *ctx) {
  if (ctx != nullptr) {
    ctx->record(OpTag::kCompare);
    ctx->record(OpTag::kSelect);
  }
  return x.raw > 0 ? x : QValue{0};
}

QValue leaky_relu(QValue x, QValue alpha_q, FixedPointFormat fmt,
                  ExecContext *ctx) {
  ExecContext local;
  ExecContext &c = ctx != nullptr ? *ctx : local;
  // Both arms are computed and then selected, as a match-action stage would.
  c.record(OpTag::kCompare);
  const QValue scaled = ops::mul(alpha_q, x, fmt, c);
  c.record(OpTag::kSelect);
  return x.raw > 0 ? x : scaled;
}

QValue loss_mse(QValue y, QValue yhat, FixedPointFormat fmt, ExecContext *ctx) {
  ExecContext local;
  ExecContext &c = ctx != nullptr ? *ctx : local;
  const QValue d = ops::sub(y, yhat, c);
  return ops::mul(d, d, fmt, c);
}

QValue loss_bce_taylor(QValue y, QValue yhat, FixedPointFormat fmt,
                       ExecContext *ctx) {
  ExecContext local;
  ExecContext &c = ctx != nullptr ? *ctx : local;
  const LogSeries series = log_series(yhat, fmt, c);
  const QValue one = encode_constant(1.0, fmt);
  const QValue positive = ops::neg(ops::mul(y, series.plus, fmt, c), c);
  const QValue not_y = ops::sub(one, y, c);
  const QValue negative = ops::mul(not_y, series.minus, fmt, c);
  return ops::sub(positive, negative, c);
}

QValue loss_cce_taylor(std::span<const QValue> y, std::span<const QValue> yhat,
                       FixedPointFormat fmt, ExecContext *ctx) {
  if (y.size() != yhat.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "cce: " + std::to_string(y.size()) + " labels vs " +
                    std::to_string(yhat.size()) + " predictions");
  }
  ExecContext local;
  ExecContext &c = ctx != nullptr ? *ctx : local;
  QValue total{0};
  for (std::size_t i = 0; i < y.size(); ++i) {
    const LogSeries series = log_series(yhat[i], fmt, c);
    total = ops::sub(total, ops::mul(y[i], series.plus, fmt, c), c);
  }
  return total;
}

double bce_reference(double y, double yhat) {
  return -(y * std::log(yhat) + (1.0 - y) * std::log(1.0 - yhat));
}

double cce_reference(std::span<const double> y, std::span<const double> yhat) {
  if (y.size() != yhat.size()) {
    throw Error(ErrorCode::kLengthMismatch, "cce reference: length mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) total -= y[i] * std::log(yhat[i]);
  return total;
}

}  // namespace inml
